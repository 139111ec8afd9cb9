#ifndef ANDERSON_FACTOR_HPP
#define ANDERSON_FACTOR_HPP

#include <utility>
#include <vector>

#include "anderson/poly.hpp"

namespace anderson {

// ---- univariate over a finite field ----

// monic irreducible factors with multiplicities, deterministic order
std::vector<std::pair<Poly, int>> factor_univariate(const Poly& f);

// roots in the coefficient field, unordered multiset without multiplicity
std::vector<FieldElement> find_roots(const Poly& f);

bool is_irreducible(const Poly& f);

// monic irreducibles over fd in the canonical (degree, encoding) order;
// index k >= 0
Poly nth_monic_irreducible(const FieldDescriptor* fd, int k);

// ---- bivariate: x-polynomials over F_q[t], factored over Q = F_q(t) ----

// Complete factorization of a monic f in F_q[t][x] into monic x-irreducibles
// with coefficients in F_q[t].  Evaluation/Hensel/recombination with the
// inseparable layers peeled off by substitution.
std::vector<std::pair<XPoly, int>> factor_over_A(const XPoly& f);

// Flagged entry point: verifies the coefficients of f (over some L containing
// F_q = F_{p^qa}) are fixed by the q-power map, projects, factors.  Errors
// with not_a_rational otherwise.
std::vector<std::pair<XPoly, int>> factor_over_A(const XPoly& f_over_L, const FieldDescriptor* qdesc);

bool is_irreducible_over_A(const XPoly& f);

} // namespace anderson

#endif
