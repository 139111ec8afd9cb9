#ifndef ANDERSON_MOTIVE_HPP
#define ANDERSON_MOTIVE_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "anderson/factor.hpp"
#include "anderson/places.hpp"
#include "anderson/polymat.hpp"
#include "anderson/rational.hpp"

namespace anderson {

struct MotiveReport {
    int r = 0;
    int d = 0;
    Rat weight;
    Poly epsilon; // monic irreducible over F_q, the characteristic place
    bool pure = false;
    bool semisimple = false;
    XPoly chi, mu; // over the F_q descriptor
};

struct CharPolyData {
    XPoly chi, mu;                                     // in A[x]
    std::vector<std::pair<XPoly, int>> factorization;  // chi into Q-irreducibles
};

// N_i(u) = det(1 - u * wedge^i Pi), i = 0..r; the zeta function is the
// alternating product prod N_i^((-1)^(i+1)).
struct ZetaFunction {
    std::vector<XPoly> numerators; // over F_q, variable u
};

// A pure Anderson motive over L = F_{q^e} with coefficient ring A = F_q[t]:
// the module L[t]^r together with the sigma-semilinear map given by T.
// Immutable; invariants are computed at construction and shared.
class Motive {
public:
    Motive(int64_t q, int e, const FieldElement& theta, const PolyMat& T);

    int64_t q() const;
    int e() const;
    int q_exp() const; // a with q = p^a
    const FieldDescriptor* base_field() const;  // L
    const FieldDescriptor* coeff_field() const; // F_q
    const FieldElement& theta() const;
    const PolyMat& tau() const;

    int rank() const;
    int dim() const; // deg_t det T, derived
    Rat weight() const;
    const Poly& epsilon() const;
    bool is_pure() const;
    bool is_valid() const;

    // throws the stored validation error, otherwise returns the report
    MotiveReport validate() const;

    // Pi = T sigma(T) ... sigma^(e-1)(T)
    const PolyMat& frobenius_matrix() const;
    const CharPolyData& char_poly_data() const;
    bool is_semisimple() const;

    // root valuations of chi at infinity divided by e, with multiplicity
    std::vector<Rat> slopes_at_infinity() const;
    bool rh_check() const;

    ZetaFunction zeta() const;

    bool operator==(const Motive& o) const;

private:
    struct Data;
    std::shared_ptr<const Data> d_;
    const Data& data() const { return *d_; }
    void require_valid() const;
    void require_chi() const;
};

Motive base_extend(const Motive& m, int ext);
Motive direct_sum(const Motive& a, const Motive& b);
// smallest p-power m with base_extend(m) semisimple
int semisimplification_degree(const Motive& m);

// series coefficients a_i of u d/du log Z for i = 1..order
std::vector<Poly> zeta_point_counts(const ZetaFunction& z, int order);

} // namespace anderson

#endif
