#include <doctest.h>

#include <numeric>

#include "anderson/algebra.hpp"
#include "anderson/linalg.hpp"
#include "anderson/corpus.hpp"
#include "anderson/morphism.hpp"
#include "anderson/rng.hpp"

using namespace anderson;
using namespace anderson::corpus;

namespace {

const FieldDescriptor* F3 = fields::get(3, 1);

// exhaustive solutions of the intertwining equation with deg_t F <= bound
std::vector<PolyMat> brute_hom(const Motive& a, const Motive& b, int bound) {
    const FieldDescriptor* L = a.base_field();
    const int cells = b.rank() * a.rank() * (bound + 1) * L->n;
    std::vector<PolyMat> out;
    uint64_t total = 1;
    for (int i = 0; i < cells; ++i) total *= static_cast<uint64_t>(L->p);
    for (uint64_t code = 0; code < total; ++code) {
        uint64_t c = code;
        PolyMat F(L, b.rank(), a.rank());
        for (int i = 0; i < b.rank(); ++i)
            for (int j = 0; j < a.rank(); ++j) {
                std::vector<FieldElement> cc;
                for (int k = 0; k <= bound; ++k) {
                    std::vector<int32_t> coords;
                    for (int w = 0; w < L->n; ++w) {
                        coords.push_back(static_cast<int32_t>(c % static_cast<uint64_t>(L->p)));
                        c /= static_cast<uint64_t>(L->p);
                    }
                    cc.emplace_back(L, std::move(coords));
                }
                F.at(i, j) = Poly(L, std::move(cc));
            }
        PolyMat lhs = F * a.tau();
        PolyMat rhs = b.tau() * sigma_mat(F, a.q_exp());
        if ((lhs - rhs).is_zero()) out.push_back(F);
    }
    return out;
}

Motive carlitz(uint64_t theta_enc) {
    // tau = t - theta over F_3
    std::vector<uint64_t> enc = {(3 - theta_enc % 3) % 3, 1};
    return scalar_motive(3, 1, theta_enc, enc);
}

} // namespace

TEST_CASE("morphism construction checks the intertwining law") {
    Motive m = sqrt_family(3, 1);
    CHECK_NOTHROW(Morphism::identity(m));
    CHECK_NOTHROW(Morphism(m, m, m.frobenius_matrix()));
    PolyMat bad(m.base_field(), 2, 2);
    bad.at(0, 0) = Poly::one(m.base_field());
    CHECK_THROWS_AS(Morphism(m, m, bad), Error);
}

TEST_CASE("End of the Carlitz-like module is A") {
    Motive c = carlitz(1);
    HomBasis hb = solve_hom(c, c);
    CHECK(hb.rank == 1);
    REQUIRE(hb.basis.size() == 1);
    CHECK(hb.basis[0].matrix().at(0, 0).deg() == 0);
    // oracle: all solutions of degree <= 3 are the A-multiples of the identity
    auto brute = brute_hom(c, c, 3);
    CHECK(brute.size() == 81); // q^(bound+1) scalars
}

TEST_CASE("Hom between different weights vanishes") {
    Motive a = carlitz(0);
    Motive b = sqrt_family(3, 1);
    HomBasis hb = solve_hom(a, b);
    CHECK(hb.rank == 0);
    CHECK(hb.basis.empty());
}

TEST_CASE("End of the unipotent example grows after extension") {
    Motive m = base_extend(unipotent_example(3), 3);
    HomBasis hb = solve_hom(m, m);
    CHECK(hb.rank == 4);
}

TEST_CASE("solver agrees with brute force on random pairs") {
    // q = 2, r <= 2, deg_t T <= 1, exhaustive check up to degree 2
    Rng rng(11);
    const FieldDescriptor* F2 = fields::get(2, 1);
    int done = 0;
    while (done < 8) {
        // random valid motives built from conjugated companion blocks
        auto sample = [&]() -> Motive {
            int d = 1 + static_cast<int>(rng.below(1));
            Motive base = sqrt_family(2, d);
            PolyMat u = PolyMat::identity(F2, 2);
            u.at(0, 1) = Poly::constant(FieldElement::from_encoding(F2, rng.below(2)));
            PolyMat uinv = scaled_inverse(u, Poly::one(F2));
            return Motive(2, 1, base.theta(), u * base.tau() * sigma_mat(uinv, 1));
        };
        Motive a = sample(), b = sample();
        HomBasis hb = solve_hom(a, b);
        auto brute = brute_hom(a, b, 2);
        // dimension check: |S_2| = q^(F_2-dimension)
        int dim2 = 0;
        for (int k = 0; k <= std::min(2, hb.degree_bound); ++k) dim2 += hb.increments[static_cast<size_t>(k)];
        uint64_t count = static_cast<uint64_t>(1) << dim2;
        CHECK(count == brute.size());
        // and every solver basis element of degree <= 2 appears in the brute set
        for (const auto& g : hb.basis) {
            if (g.matrix().deg_t() > 2) continue;
            bool found = false;
            for (const auto& F : brute) found = found || F == g.matrix();
            CHECK(found);
        }
        ++done;
    }
}

TEST_CASE("isogeny detection") {
    Motive m = sqrt_family(3, 1);
    Morphism t_id = Morphism::scalar(m, Poly::x(F3));
    CHECK(is_isogeny(t_id));
    CHECK(isogeny_annihilator(t_id) == Poly::x(F3));
    PolyMat z(m.base_field(), 2, 2);
    Morphism zero(m, m, z);
    CHECK_FALSE(is_isogeny(zero));
}

TEST_CASE("adapted isogeny between conjugate motives over F_9") {
    // theta = 0, e = 2, with gamma a generator of F_9
    const FieldDescriptor* F9 = fields::get(3, 2);
    FieldElement g = FieldElement::gen(F9);
    Poly t = Poly::x(F9);
    PolyMat T(F9, 2, 2);
    T.at(0, 0) = t + Poly::one(F9);
    T.at(0, 1) = Poly::constant(g.pow(3).inv()); // gamma^{-q}
    T.at(1, 0) = -Poly::constant(g.pow(3));
    T.at(1, 1) = t - Poly::one(F9);
    PolyMat Tp(F9, 2, 2);
    Tp.at(0, 0) = t + Poly::one(F9) - Poly::constant(g * g.pow(3).inv());
    Tp.at(0, 1) = t * Poly::constant(g.pow(3).inv());
    Tp.at(1, 0) = Poly::constant(g.pow(3) - g);
    Tp.at(1, 1) = t;
    // transposed data fits the column convention
    Motive M(3, 2, FieldElement::zero(F9), T.transpose());
    Motive Mp(3, 2, FieldElement::zero(F9), Tp.transpose());
    PolyMat F(F9, 2, 2);
    F.at(0, 0) = t;
    F.at(0, 1) = Poly::constant(g);
    F.at(1, 1) = Poly::one(F9);
    Morphism f(Mp, M, F);
    CHECK(is_isogeny(f));
    IsogenyData data = isogeny_data(f);
    CHECK(data.coker_dim == 1);
    CHECK(data.elementary_divisors[0].is_one());
    CHECK(data.elementary_divisors[1] == map_into(Poly::x(F3), F9));
}

TEST_CASE("degrees and classification of scalar isogenies") {
    Motive c = carlitz(1); // theta = 1
    Morphism f = Morphism::scalar(c, Poly::x(F3));
    IsogenyData d1 = isogeny_data(f);
    CHECK(d1.degree == Poly::x(F3));
    CHECK(d1.separable);
    CHECK_FALSE(d1.purely_inseparable);
    CHECK(d1.separable_part == Poly::x(F3));
    CHECK(d1.inseparable_part.is_one());

    Morphism g = Morphism::scalar(c, Poly::x(F3) - Poly::one(F3)); // t - theta
    IsogenyData d2 = isogeny_data(g);
    CHECK(d2.degree == Poly::x(F3) - Poly::one(F3));
    CHECK(d2.purely_inseparable);
    CHECK_FALSE(d2.separable);
    CHECK(d2.inseparable_part == d2.degree);
}

TEST_CASE("degree of the Frobenius isogeny") {
    // deg(pi) = epsilon^(d e / deg epsilon)
    std::vector<Motive> samples = {sqrt_family(3, 2), base_extend(sqrt_family(3, 1), 2),
                                   drinfeld_example(3, 1, 1)};
    // plus a Carlitz module with quadratic epsilon
    {
        const FieldDescriptor* F9 = fields::get(3, 2);
        PolyMat T(F9, 1, 1);
        T.at(0, 0) = Poly::x(F9) - Poly::constant(FieldElement::gen(F9));
        samples.push_back(Motive(3, 2, FieldElement::gen(F9), T));
    }
    for (const Motive& m : samples) {
        Morphism pi(m, m, m.frobenius_matrix());
        IsogenyData data = isogeny_data(pi);
        int expo = m.dim() * m.e() / m.epsilon().deg();
        Poly want = Poly::one(m.coeff_field());
        for (int i = 0; i < expo; ++i) want = want * m.epsilon();
        CHECK(data.degree == want);
        CHECK(data.separable_part.is_one());
        CHECK(data.purely_inseparable);
    }
}

TEST_CASE("norm is the determinant and multiplies") {
    Motive m = sqrt_family(3, 2);
    Morphism a = Morphism::scalar(m, Poly::x(F3) + Poly::one(F3));
    // N(a id) = a^r
    Poly na = norm_raw(a);
    Poly want = (Poly::x(F3) + Poly::one(F3)) * (Poly::x(F3) + Poly::one(F3));
    CHECK(na == want);
    Morphism pi(m, m, m.frobenius_matrix());
    CHECK(norm_raw(compose(a, pi)) == norm_raw(a) * norm_raw(pi));
    // monic N equals the degree generator for semisimple motives
    CHECK(norm_monic(pi) == isogeny_data(pi).degree);
    CHECK(norm_monic(a) == isogeny_data(a).degree);
}

TEST_CASE("dual isogenies") {
    Motive m = sqrt_family(3, 1);
    Morphism t_id = Morphism::scalar(m, Poly::x(F3));
    auto [dual1, a1] = dual_isogeny(t_id);
    CHECK(a1 == Poly::x(F3) * Poly::x(F3)); // N(t) = t^2
    CHECK(dual1.matrix() == Morphism::scalar(m, Poly::x(F3)).matrix());

    Morphism pi(m, m, m.frobenius_matrix());
    auto [dualp, ap] = dual_isogeny(pi);
    CHECK(ap == Poly::x(F3)); // monic N(pi) = t
    CHECK((compose(pi, dualp).matrix() - Morphism::scalar(m, ap).matrix()).is_zero());
    // dual of the dual relates back by a unit times a power of a
    auto [dualdual, add] = dual_isogeny(dualp);
    CHECK(add == Poly::x(F3));
    CHECK(dualdual.matrix() == pi.matrix());
}

TEST_CASE("kernel and image of block projections") {
    Motive m = sqrt_family(3, 1);
    Motive s = direct_sum(m, m);
    const FieldDescriptor* L = m.base_field();
    // projection onto the second block
    PolyMat P(L, 2, 4);
    P.at(0, 2) = Poly::one(L);
    P.at(1, 3) = Poly::one(L);
    Morphism proj(s, m, P);
    KernelImage ki = kernel_image(proj);
    REQUIRE(ki.kernel.has_value());
    CHECK(ki.kernel->rank() == 2);
    CHECK(ki.kernel->char_poly_data().chi == m.char_poly_data().chi);
    REQUIRE(ki.image.has_value());
    CHECK(ki.image->rank() == 2);
    CHECK(ki.image->char_poly_data().chi == m.char_poly_data().chi);
    CHECK(ki.image->weight() == s.weight());

    // injective: kernel is zero, image isomorphic to the source
    Morphism t_id = Morphism::scalar(m, Poly::x(F3));
    KernelImage ki2 = kernel_image(t_id);
    CHECK_FALSE(ki2.kernel.has_value());
    REQUIRE(ki2.image.has_value());
    CHECK(ki2.image->rank() == 2);
}

TEST_CASE("separable-inseparable factorization") {
    Motive c = carlitz(1);
    // f = (t - theta) t id: separable part (t), inseparable part (t - theta)
    Poly a = Poly::x(F3) * (Poly::x(F3) - Poly::one(F3));
    Morphism f = Morphism::scalar(c, a);
    SepInsep si = sep_insep_factorization(f);
    IsogenyData ds = isogeny_data(si.sep);
    IsogenyData di = isogeny_data(si.insep);
    CHECK(ds.separable);
    CHECK(ds.degree == Poly::x(F3));
    CHECK(di.purely_inseparable);
    CHECK(di.degree == Poly::x(F3) - Poly::one(F3));
    CHECK((compose(si.insep, si.sep).matrix() - f.matrix()).is_zero());

    // purely separable input: the inseparable factor is an isomorphism
    Morphism g = Morphism::scalar(c, Poly::x(F3));
    SepInsep si2 = sep_insep_factorization(g);
    CHECK(isogeny_data(si2.insep).coker_dim == 0);
    // purely inseparable input: the separable factor is an isomorphism
    Morphism h = Morphism::scalar(c, Poly::x(F3) - Poly::one(F3));
    SepInsep si3 = sep_insep_factorization(h);
    CHECK(isogeny_data(si3.sep).coker_dim == 0);
}

TEST_CASE("degree is multiplicative and matches the cokernel") {
    Rng rng(5);
    Motive m = sqrt_family(3, 2);
    std::vector<Morphism> pool = {Morphism::scalar(m, Poly::x(F3)),
                                  Morphism(m, m, m.frobenius_matrix()),
                                  Morphism::scalar(m, Poly::x(F3) + Poly::one(F3))};
    for (const auto& f : pool)
        for (const auto& g : pool) {
            Morphism fg = compose(f, g);
            IsogenyData df = isogeny_data(f), dg = isogeny_data(g), dfg = isogeny_data(fg);
            CHECK(dfg.degree == df.degree * dg.degree);
            // dim_Fq A / deg f = dim_L coker f = deg det F
            CHECK(dfg.degree.deg() == dfg.coker_dim);
            CHECK(dfg.coker_dim == det(fg.matrix()).deg());
        }
}

TEST_CASE("factor by quotient: principal case and counterexample") {
    Motive c = carlitz(1);
    const FieldDescriptor* L = c.base_field();
    // K = M / aM with a = t: rho = reduction, tau_K = (t - 1) mod t
    {
        QuotientData kd;
        kd.moduli = {map_into(Poly::x(F3), L)};
        kd.rho = PolyMat::identity(L, 1);
        kd.tau_k = PolyMat(L, 1, 1);
        kd.tau_k.at(0, 0) = c.tau().at(0, 0);
        auto [sub, incl] = factor_by_quotient(c, kd);
        CHECK(sub.rank() == 1);
        CHECK(isogeny_data(incl).degree == Poly::x(F3));
    }
    // trivial K = 0 via an empty-modulus presentation is excluded by shape;
    // instead K with unit modulus is rejected up front
    {
        QuotientData kd;
        kd.moduli = {Poly::one(L)};
        kd.rho = PolyMat::identity(L, 1);
        kd.tau_k = PolyMat(L, 1, 1);
        CHECK_THROWS_AS(factor_by_quotient(c, kd), Error);
    }
    // the counterexample shape: K = coker tau with tau_K = 0 and theta^q != theta
    {
        const FieldDescriptor* F9 = fields::get(3, 2);
        FieldElement theta = FieldElement::gen(F9); // theta^q != theta
        PolyMat T(F9, 1, 1);
        T.at(0, 0) = Poly::x(F9) - Poly::constant(theta);
        Motive cc(3, 2, theta, T);
        QuotientData kd;
        kd.moduli = {Poly::x(F9) - Poly::constant(theta)};
        kd.rho = PolyMat::identity(F9, 1);
        kd.tau_k = PolyMat(F9, 1, 1); // zero map
        CHECK_THROWS_WITH_AS(factor_by_quotient(cc, kd), doctest::Contains("BAD_QUOTIENT"), Error);
    }
}

TEST_CASE("ideal images") {
    Motive m = sqrt_family(3, 1);
    // principal ideal generated by a in A: M^I = aM
    {
        Morphism a = Morphism::scalar(m, Poly::x(F3));
        IdealImage ii = ideal_image(m, {a});
        CHECK(ii.kernel_ideal);
        SmithResult s = smith_normal_form(ii.inclusion.matrix());
        CHECK(s.D.at(0, 0) == map_into(Poly::x(F3), m.base_field()));
        CHECK(s.D.at(1, 1) == map_into(Poly::x(F3), m.base_field()));
    }
    // principal ideal generated by an isogeny: M^I isomorphic to M
    {
        Morphism pi(m, m, m.frobenius_matrix());
        IdealImage ii = ideal_image(m, {pi});
        CHECK(ii.kernel_ideal);
        // f_I^{-1} g is an isomorphism: the two generators span the same module
        auto sol = hermite_solve_mat(ii.inclusion.matrix(), pi.matrix());
        REQUIRE(sol.has_value());
        CHECK(det(*sol).deg() == 0);
        CHECK(ii.sub.char_poly_data().chi == m.char_poly_data().chi);
    }
    // isomorphic principal ideals give isomorphic images
    {
        Morphism pi(m, m, m.frobenius_matrix());
        Morphism upi = pi.scaled(Poly::constant(FieldElement::from_encoding(F3, 2)));
        IdealImage a = ideal_image(m, {pi});
        IdealImage b = ideal_image(m, {upi, compose(upi, pi)});
        CHECK(a.sub.char_poly_data().chi == b.sub.char_poly_data().chi);
        auto sol = hermite_solve_mat(a.inclusion.matrix(), b.inclusion.matrix());
        REQUIRE(sol.has_value());
        CHECK(det(*sol).deg() == 0); // unimodular change of basis
    }
    // no isogeny in the ideal
    {
        PolyMat z(m.base_field(), 2, 2);
        Morphism zero(m, m, z);
        CHECK_THROWS_WITH_AS(ideal_image(m, {zero}), doctest::Contains("NO_ISOGENY_IN_IDEAL"),
                             Error);
    }
}

TEST_CASE("hom basis reductions stay independent at finite level") {
    // torsion-freeness probe at n = 2: the reductions of an A-basis modulo v^2
    // span rho * dim(A/v^2) dimensions over F_q
    Motive m = sqrt_family(3, 1);
    HomBasis hb = solve_hom(m, m);
    const FieldDescriptor* L = m.base_field();
    Poly v2 = map_into(Poly::x(F3) + Poly::one(F3), L); // v = t + 1 != epsilon
    v2 = v2 * v2;
    // coordinates of a g t^s mod v^2 over F_p
    auto coords = [&](const PolyMat& F) {
        std::vector<int32_t> out;
        for (const auto& e : F.a) {
            Poly r = divrem(e, v2).second;
            for (int i = 0; i < 2; ++i) {
                FieldElement c = r.coeff(i);
                for (int w = 0; w < L->n; ++w) out.push_back(c.coeff(w));
            }
        }
        return out;
    };
    std::vector<std::vector<int32_t>> rows;
    for (const auto& g : hb.basis)
        for (int s = 0; s < 2; ++s) {
            PolyMat F = g.matrix() * Poly::one(L).shifted(s);
            rows.push_back(coords(F));
        }
    FpMat mat(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()), 3);
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j) mat.at(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    CHECK(fp_rank(mat) == hb.rank * 2);
}

TEST_CASE("factor by the trivial quotient returns the motive") {
    Motive m = sqrt_family(3, 1);
    QuotientData kd; // K = 0
    kd.rho = PolyMat(m.base_field(), 0, 2);
    kd.tau_k = PolyMat(m.base_field(), 0, 0);
    auto [sub, incl] = factor_by_quotient(m, kd);
    CHECK(sub.tau() == m.tau());
    CHECK(incl.matrix() == PolyMat::identity(m.base_field(), 2));
}

TEST_CASE("mixed isogenies are neither separable nor purely inseparable") {
    Motive c = carlitz(1);
    Morphism f = Morphism::scalar(c, Poly::x(F3) * (Poly::x(F3) - Poly::one(F3)));
    IsogenyData d = isogeny_data(f);
    CHECK_FALSE(d.separable);
    CHECK_FALSE(d.purely_inseparable);
    CHECK(d.separable_part == Poly::x(F3));
    CHECK(d.inseparable_part == Poly::x(F3) - Poly::one(F3));
}

TEST_CASE("dual of an isogeny between distinct motives") {
    // conjugate pair: U intertwines the source with its twist, so U t is a
    // non-endomorphism isogeny whose dual comes from the minimal annihilator
    Motive m = sqrt_family(3, 2);
    const FieldDescriptor* L = m.base_field();
    PolyMat u = PolyMat::identity(L, 2);
    u.at(0, 1) = Poly::x(L);
    PolyMat uinv = scaled_inverse(u, Poly::one(L));
    Motive mc(3, 1, m.theta(), u * m.tau() * sigma_mat(uinv, 1));
    Morphism f(m, mc, u * map_into(Poly::x(F3), L));
    REQUIRE(is_isogeny(f));
    CHECK(isogeny_data(f).coker_dim == 2);
    auto [dual, a] = dual_isogeny(f);
    CHECK(a == Poly::x(F3));
    CHECK(dual.matrix() == uinv);
    PolyMat expect = PolyMat::identity(L, 2) * map_into(a, L);
    CHECK((compose(dual, f).matrix() - expect).is_zero());
    CHECK((compose(f, dual).matrix() - expect).is_zero());
}

TEST_CASE("the degree generator annihilates the cokernel") {
    Motive m = sqrt_family(3, 2);
    std::vector<Morphism> pool = {Morphism::scalar(m, Poly::x(F3)),
                                  Morphism(m, m, m.frobenius_matrix()),
                                  compose(Morphism(m, m, m.frobenius_matrix()),
                                          Morphism::scalar(m, Poly::x(F3) + Poly::one(F3)))};
    for (const Morphism& f : pool) {
        IsogenyData d = isogeny_data(f);
        // deg(f) * target lands inside the image of f
        PolyMat H = column_hermite(f.matrix());
        Poly aL = map_into(d.degree, m.base_field());
        for (int i = 0; i < m.rank(); ++i) {
            std::vector<Poly> v(static_cast<size_t>(m.rank()), Poly::zero(m.base_field()));
            v[static_cast<size_t>(i)] = aL;
            auto res = hermite_reduce(H, v);
            for (const auto& e : res) CHECK(e.is_zero());
        }
    }
}

TEST_CASE("chi interpolates the degrees of a - pi") {
    // the characteristic polynomial evaluated at a in A generates deg(a - pi)
    std::vector<Motive> samples = {sqrt_family(3, 1), sqrt_family(3, 2),
                                   base_extend(sqrt_family(3, 1), 2), drinfeld_example(3, 1, 1)};
    std::vector<Poly> scalars = {Poly::x(F3) + Poly::one(F3), Poly::x(F3),
                                 Poly::one(F3), Poly::x(F3) * Poly::x(F3) + Poly::one(F3)};
    for (const Motive& m : samples) {
        const XPoly& chi = m.char_poly_data().chi;
        Morphism pi(m, m, m.frobenius_matrix());
        for (const Poly& a : scalars) {
            Morphism f = Morphism::scalar(m, a) - pi;
            if (!is_isogeny(f)) continue;
            // chi(a) as an element of A
            Poly val = Poly::zero(m.coeff_field());
            for (int i = chi.deg(); i >= 0; --i) val = val * a + chi.coeff(i);
            REQUIRE(!val.is_zero());
            CHECK(monic(val) == isogeny_data(f).degree);
        }
    }
}
