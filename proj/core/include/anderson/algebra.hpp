#ifndef ANDERSON_ALGEBRA_HPP
#define ANDERSON_ALGEBRA_HPP

#include <optional>
#include <vector>

#include "anderson/morphism.hpp"

namespace anderson {

// r_{Q_w}(f, g) of Definition-style factor matching: sum over common
// Q-irreducible factors of m * n * (sum of local degrees at w).
int r_value(const XPoly& f, const XPoly& g, const Place& w);

// dim_Q Hom(M, M') x Q for semisimple motives, via the characteristic
// polynomials at the first good finite place; 0 for distinct weights
int hom_dimension(const Motive& m, const Motive& mp);

// chi equality test with a witness isogeny extracted from the solved
// Hom-space by a deterministic sweep
std::pair<bool, std::optional<Morphism>> isogeny_equivalent(const Motive& m, const Motive& mp);

struct PlaceInvariant {
    Place base;     // epsilon or infinity
    int e = 1;      // ramification over the base place
    int f = 1;      // residue degree over the base place
    Rat slope;      // Newton slope of the factor
    Rat invariant;  // in [0, 1)
};

struct AlgebraComponent {
    XPoly mu;                              // Q-irreducible factor of mu_pi
    int multiplicity = 0;                  // m with mu^m || chi
    int center_degree = 0;                 // [F_i : Q] = deg mu
    int dim_over_center = 0;               // m^2
    std::vector<PlaceInvariant> invariants;
    int index = 1;                         // lcm of invariant denominators
    bool division_algebra = false;         // index == multiplicity
};

struct EndAlgebraReport {
    std::vector<AlgebraComponent> components;
    int dim_q = 0; // dim_Q End x Q
    int rank = 0;  // r of the motive
};

EndAlgebraReport hasse_invariants(const Motive& m);

bool is_simple(const Motive& m);
bool is_semisimple_algebra_consistent(const Motive& m);

} // namespace anderson

#endif
