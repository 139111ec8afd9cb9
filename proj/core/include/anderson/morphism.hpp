#ifndef ANDERSON_MORPHISM_HPP
#define ANDERSON_MORPHISM_HPP

#include <optional>
#include <utility>
#include <vector>

#include "anderson/motive.hpp"

namespace anderson {

// A morphism of motives: a matrix F over L[t] with F T = T' sigma(F).
class Morphism {
public:
    Morphism(const Motive& src, const Motive& tgt, const PolyMat& F);

    static Morphism identity(const Motive& m);
    static Morphism scalar(const Motive& m, const Poly& a); // a over F_q

    const Motive& source() const { return src_; }
    const Motive& target() const { return tgt_; }
    const PolyMat& matrix() const { return F_; }
    bool is_zero() const { return F_.is_zero(); }
    bool is_endomorphism() const { return src_ == tgt_; }

    Morphism operator+(const Morphism& o) const;
    Morphism operator-(const Morphism& o) const;
    // multiply by a scalar in A = F_q[t]
    Morphism scaled(const Poly& a) const;

private:
    Motive src_, tgt_;
    PolyMat F_;
};

Morphism compose(const Morphism& g, const Morphism& f); // g after f

struct HomBasis {
    std::vector<Morphism> basis; // an A-basis of Hom(M, M')
    int rank = 0;                // rho
    int degree_bound = 0;        // the bound B the solver stopped at
    std::vector<int> increments; // delta_B in F_q-dimensions, B = 0..degree_bound
};

// all F with deg_t F <= B solving the intertwining equation, B grown until
// the dimension increments stabilize
HomBasis solve_hom(const Motive& m, const Motive& mp);

bool is_isogeny(const Morphism& f);
// minimal monic a in F_q[t] annihilating coker f
Poly isogeny_annihilator(const Morphism& f);

struct IsogenyData {
    std::vector<Poly> elementary_divisors; // all r, over L[t], monic
    int coker_dim = 0;                     // dim_L coker
    Poly degree;                           // monic generator of deg(f) in F_q[t]
    Poly separable_part, inseparable_part; // degree = separable * inseparable
    std::vector<Poly> moduli;              // nontrivial divisors (the cokernel)
    PolyMat tau_k;                         // induced semilinear map, x -> tau_k sigma(x)
    bool separable = false;
    bool purely_inseparable = false;
};

IsogenyData isogeny_data(const Morphism& f);

// N(f) = det F for endomorphisms; lies in F_q[t]
Poly norm_raw(const Morphism& f);
Poly norm_monic(const Morphism& f);

// dual with f dual(f) = a = dual(f) f; a = monic N(f) for a semisimple
// endomorphism, the minimal annihilator otherwise
std::pair<Morphism, Poly> dual_isogeny(const Morphism& f);

struct KernelImage {
    std::optional<Motive> kernel;
    std::optional<Morphism> kernel_inclusion; // ker -> source
    std::optional<Motive> image;
    std::optional<Morphism> image_inclusion; // im -> target
    std::optional<Morphism> projection;      // source -> im
};

KernelImage kernel_image(const Morphism& f);

// f = insep . sep through the intermediate motive
struct SepInsep {
    Morphism sep;    // source -> middle, etale cokernel
    Morphism insep;  // middle -> target, nilpotent cokernel
};
SepInsep sep_insep_factorization(const Morphism& f);

// a finite torsion quotient M ->> K presented by elementary moduli, the
// surjection matrix, and the induced semilinear action
struct QuotientData {
    std::vector<Poly> moduli; // over L[t], nonconstant
    PolyMat rho;              // k x r
    PolyMat tau_k;            // k x k
};

// kernel of the surjection as a motive, with the inclusion isogeny
std::pair<Motive, Morphism> factor_by_quotient(const Motive& m, const QuotientData& k);

struct IdealImage {
    Motive sub;          // M^I
    Morphism inclusion;  // f_I
    bool kernel_ideal = false;
};
IdealImage ideal_image(const Motive& m, const std::vector<Morphism>& generators);

} // namespace anderson

#endif
