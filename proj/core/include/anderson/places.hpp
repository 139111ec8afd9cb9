#ifndef ANDERSON_PLACES_HPP
#define ANDERSON_PLACES_HPP

#include <vector>

#include "anderson/poly.hpp"
#include "anderson/rational.hpp"

namespace anderson {

// A place of Q = F_q(t): either the place at infinity or a monic irreducible
// of F_q[t].
struct Place {
    bool infinite = false;
    Poly prime; // monic irreducible when finite

    static Place at_infinity(const FieldDescriptor* fd) {
        Place p;
        p.infinite = true;
        p.prime = Poly::zero(fd);
        return p;
    }
    static Place finite(const Poly& prime) {
        Place p;
        p.infinite = false;
        p.prime = prime;
        return p;
    }
    int degree() const { return infinite ? 1 : prime.deg(); }
    bool operator==(const Place& o) const { return infinite == o.infinite && prime == o.prime; }
    std::string str() const;
};

// v_infinity(g) = -deg g; at a finite place the multiplicity of the prime.
int place_valuation(const Poly& a, const Place& v);

struct NPSegment {
    Rat slope;  // a segment of slope s and length l certifies l roots of valuation -s
    int length; // horizontal length
};

struct NewtonPolygon {
    std::vector<NPSegment> segments; // slopes strictly increasing
    int zero_root_multiplicity = 0;
};

NewtonPolygon newton_polygon(const XPoly& f, const Place& v);

// A place of F = Q[x]/(f) over the base place: ramification e, residue degree
// f over the base residue field, and the Newton slope lambda (the root of f
// has valuation -lambda in the base-place normalization).
struct LocalPlaceFactor {
    int e = 1;
    int f = 1;
    Rat lambda = Rat(0);
};

// The places of Q[x]/(f) over w, for f monic irreducible over Q.  One-level
// residual analysis with root-shift recursion on denominator-1 degenerate
// segments; errors with local_factor_indeterminate past the depth cap.
std::vector<LocalPlaceFactor> local_places(const XPoly& f, const Place& w, int depth_cap = 8);

// monic irreducibles in (degree, encoding) order, skipping `skip` if given
Place nth_finite_place(const FieldDescriptor* fd, int k);

} // namespace anderson

#endif
