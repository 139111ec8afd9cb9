#ifndef ANDERSON_LOCAL_HPP
#define ANDERSON_LOCAL_HPP

#include "anderson/linalg.hpp"
#include "anderson/morphism.hpp"
#include "anderson/series.hpp"

namespace anderson {

// Completion of a motive at a finite place, truncated at precision n:
// the module (L[t]/modulus)^r with the semilinear map x -> matrix * sigma^fold(x).
struct LocalShtuka {
    Place place;   // over F_q
    int precision = 1;
    int qa = 1;    // sigma is the q-power map, q = p^qa
    int fold = 1;  // a sigma^(qa*fold)-shtuka after component reduction
    Poly modulus;  // over L
    PolyMat matrix;
    FieldElement theta; // characteristic value of the source motive
    bool etale = false;
};

LocalShtuka localize(const Motive& m, const Place& v, int n);

struct EtaleNilDecomposition {
    int etale_dim = 0, nil_dim = 0; // L-dimensions
    // columns are coordinates in the monomial basis of (L[t]/modulus)^r
    GMat<FieldElement> basis_change;           // [etale | nilpotent]
    GMat<FieldElement> etale_block, nil_block; // induced actions
};

// splits the completion at the characteristic place into its etale and
// nilpotent parts; errors with not_characteristic_place elsewhere
EtaleNilDecomposition etale_nil_decompose(const LocalShtuka& s);

// component modulo the distinguished factor of the place over L, with the
// f-fold composed Frobenius, f = [F_v cap L : F_q]
LocalShtuka reduce_mod_a0(const LocalShtuka& s);

struct TateModuleData {
    Place place;
    int precision = 1;
    int splitting_degree = 1;           // fixed points rational over F_{q^(e*m)}
    const FieldDescriptor* ext = nullptr; // L' = F_{q^(e*m)}
    Poly modulus;                         // v^n over L'
    std::vector<std::vector<Poly>> basis; // A/v^n-basis of the fixed module
    PolyMat frobenius;                    // q^e-power action, over F_q mod v^n
    PolyMat pi_action;                    // Pi in the same basis, over F_q mod v^n
};

// forced_ext > 0 pins the splitting extension degree instead of searching
TateModuleData tate_module(const Motive& m, const Place& v, int n, int cap = 64, int forced_ext = 0);

struct LatticeChain {
    int k = 0, l = 1;
    int precision = 0;
    std::vector<LaurentMat> lattices; // canonical bases of Lambda_0 .. Lambda_l
    std::vector<int> coker_dims;      // dim_L(Lambda_{i+1} / Lambda_i)
};

// the window filtration at infinity; N defaults to 2(d + r) + 4
LatticeChain infinity_filtration(const Motive& m, int N = -1);

struct BigShtuka {
    LaurentMat tau; // rl x rl cyclic block matrix
    LaurentMat pi;  // satisfies pi^l = z^k
    std::vector<std::pair<FieldElement, LaurentMat>> lambda; // (lambda, Lambda(lambda))
};

BigShtuka big_shtuka_infinity(const Motive& m, const LatticeChain& chain);

} // namespace anderson

#endif
