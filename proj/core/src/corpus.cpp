#include "anderson/corpus.hpp"

#include <numeric>
#include <sstream>

#include "anderson/algebra.hpp"
#include "anderson/local.hpp"

namespace anderson::corpus {

namespace {

int64_t char_of(int64_t q) {
    int64_t d = 2;
    while (d * d <= q && q % d) ++d;
    return (d * d <= q) ? d : q;
}

int exp_of(int64_t q) {
    int64_t p = char_of(q);
    int a = 0;
    for (int64_t v = q; v > 1; v /= p) ++a;
    return a;
}

const FieldDescriptor* base_field(int64_t q, int e) { return fields::get(char_of(q), exp_of(q) * e); }

} // namespace

Motive sqrt_family(int64_t q, int d, int e) {
    const FieldDescriptor* L = base_field(q, e);
    PolyMat T(L, 2, 2);
    T.at(0, 1) = Poly::one(L);
    T.at(1, 0) = Poly::one(L).shifted(d);
    return Motive(q, e, FieldElement::zero(L), T);
}

Motive unipotent_example(int64_t q, uint64_t zeta_enc, int e) {
    const FieldDescriptor* L = base_field(q, e);
    FieldElement zeta = FieldElement::from_encoding(L, zeta_enc);
    internal_check(!zeta.is_zero(), "zeta must be a unit");
    Poly diag = Poly::one(L) - Poly::constant(zeta).shifted(1); // 1 - zeta t
    PolyMat T(L, 2, 2);
    T.at(0, 0) = diag;
    T.at(1, 1) = diag;
    T.at(1, 0) = Poly::x(L);
    return Motive(q, e, zeta.inv(), T);
}

Motive biquadratic_example(int64_t q, uint64_t a_enc, uint64_t b_enc, int e) {
    const FieldDescriptor* L = base_field(q, e);
    FieldElement a = FieldElement::from_encoding(L, a_enc);
    FieldElement b = FieldElement::from_encoding(L, b_enc);
    PolyMat T(L, 4, 4);
    Poly t = Poly::x(L);
    T.at(0, 3) = Poly::constant(a);
    T.at(1, 1) = Poly::constant(b);
    T.at(1, 2) = Poly::one(L);
    T.at(2, 0) = t;
    T.at(2, 2) = -Poly::constant(b);
    T.at(3, 1) = t;
    return Motive(q, e, FieldElement::zero(L), T);
}

Motive drinfeld_example(int64_t q, uint64_t a_enc, uint64_t theta_enc) {
    const FieldDescriptor* L = base_field(q, 1);
    FieldElement a = FieldElement::from_encoding(L, a_enc);
    FieldElement theta = FieldElement::from_encoding(L, theta_enc);
    PolyMat T(L, 2, 2);
    T.at(0, 0) = Poly::constant(a);
    T.at(0, 1) = Poly::x(L) - Poly::constant(theta);
    T.at(1, 0) = Poly::one(L);
    return Motive(q, 1, theta, T);
}

Motive scalar_motive(int64_t q, int e, uint64_t theta_enc, const std::vector<uint64_t>& tau_enc) {
    const FieldDescriptor* L = base_field(q, e);
    PolyMat T(L, 1, 1);
    T.at(0, 0) = Poly::from_encodings(L, tau_enc);
    return Motive(q, e, FieldElement::from_encoding(L, theta_enc), T);
}

namespace {

using Check = std::function<void(std::ostringstream&)>;

void run_claim(std::vector<ClaimResult>& out, const std::string& name, const Check& fn) {
    ClaimResult res;
    res.name = name;
    std::ostringstream detail;
    try {
        fn(detail);
        res.pass = true;
    } catch (const std::exception& e) {
        detail << e.what();
        res.pass = false;
    }
    res.detail = detail.str();
    out.push_back(res);
}

void expect(bool ok, const std::string& what) {
    if (!ok) throw std::runtime_error(what);
}

XPoly xpoly_x2_minus_td(const FieldDescriptor* fq, int d) {
    // x^2 - t^d
    std::vector<Poly> c = {-Poly::one(fq).shifted(d), Poly::zero(fq), Poly::one(fq)};
    return XPoly(fq, std::move(c));
}

} // namespace

std::vector<ClaimResult> run_corpus() {
    std::vector<ClaimResult> out;

    for (int d = 1; d <= 3; ++d) {
        run_claim(out, "sqrt-family q3 d" + std::to_string(d) + " base data", [&](std::ostringstream& os) {
            Motive m = sqrt_family(3, d);
            MotiveReport rep = m.validate();
            expect(rep.r == 2 && rep.d == d, "rank/dimension");
            expect(rep.weight == Rat(d, 2), "weight");
            expect(rep.pure, "purity");
            XPoly want = xpoly_x2_minus_td(m.coeff_field(), d);
            expect(rep.chi == want && rep.mu == want, "chi = mu = x^2 - t^d");
            expect(rep.semisimple, "semisimple over F_3");
            os << "chi " << rep.chi.str();
        });
    }
    run_claim(out, "sqrt-family q2 d2 not semisimple", [&](std::ostringstream& os) {
        Motive m = sqrt_family(2, 2);
        expect(!m.is_semisimple(), "mu = (x - t)^2 in characteristic 2");
        os << "mu " << m.char_poly_data().mu.str();
    });
    for (int d = 1; d <= 3; d += 2) {
        run_claim(out, "sqrt-family q3 d" + std::to_string(d) + " End dimension 2", [&](std::ostringstream& os) {
            Motive m = sqrt_family(3, d);
            HomBasis hb = solve_hom(m, m);
            expect(hb.rank == 2, "solver rank");
            os << "rank " << hb.rank << " at degree bound " << hb.degree_bound;
        });
    }
    for (int d = 1; d <= 3; ++d) {
        run_claim(out, "sqrt-family q3 d" + std::to_string(d) + " quadratic extension", [&](std::ostringstream& os) {
            Motive m = base_extend(sqrt_family(3, d), 2);
            const CharPolyData& cp = m.char_poly_data();
            // chi = (x - t^d)^2
            XPoly lin(m.coeff_field(),
                      {-Poly::one(m.coeff_field()).shifted(d), Poly::one(m.coeff_field())});
            expect(cp.chi == lin * lin, "chi = (x - t^d)^2");
            expect(m.is_semisimple(), "semisimple");
            EndAlgebraReport rep = hasse_invariants(m);
            expect(rep.dim_q == 4, "dim_Q E = 4");
            expect(rep.components.size() == 1, "one component");
            Rat want = mod_one(Rat(d, 2));
            for (const auto& pi : rep.components[0].invariants)
                expect(pi.invariant == want, "invariant d/2 mod 1");
            expect(is_simple(m) == (d % 2 == 1), "simple iff d odd");
            os << "invariants ";
            for (const auto& pi : rep.components[0].invariants) os << to_string(pi.invariant) << " ";
        });
    }
    run_claim(out, "sqrt-family q3 d2 split witness", [&](std::ostringstream& os) {
        Motive m = sqrt_family(3, 2);
        Motive plus = scalar_motive(3, 1, 0, {0, 1});  // tau = t
        Motive minus = scalar_motive(3, 1, 0, {0, 2}); // tau = -t
        Motive split = direct_sum(minus, plus);
        auto [eq, wit] = isogeny_equivalent(m, split);
        expect(eq, "chi agreement");
        expect(wit.has_value() && is_isogeny(*wit), "witness isogeny");
        os << "witness det " << det(wit->matrix()).str();
    });
    run_claim(out, "sqrt-family d1 filtration", [&](std::ostringstream& os) {
        Motive m = sqrt_family(3, 1);
        LatticeChain ch = infinity_filtration(m);
        expect(ch.k == 1 && ch.l == 2, "(k, l) = (1, 2)");
        expect(ch.coker_dims == std::vector<int>({1, 1}), "cokernel dimensions (1, 1)");
        os << "k " << ch.k << " l " << ch.l;
    });
    run_claim(out, "sqrt-family d1 e2 zeta", [&](std::ostringstream& os) {
        Motive m = base_extend(sqrt_family(3, 1), 2);
        ZetaFunction z = m.zeta();
        const FieldDescriptor* fq = m.coeff_field();
        // N_1 = (1 - t u)^2, N_2 = 1 - t^2 u
        XPoly tu(fq, {Poly::one(fq), -Poly::x(fq)}); // 1 - t u
        XPoly n2(fq, {Poly::one(fq), -(Poly::x(fq) * Poly::x(fq))});
        expect(z.numerators.size() == 3, "three numerators");
        expect(z.numerators[0] == XPoly(fq, {Poly::one(fq), -Poly::one(fq)}), "N_0 = 1 - u");
        expect(z.numerators[1] == tu * tu, "N_1 = (1 - t u)^2");
        expect(z.numerators[2] == n2, "N_2 = 1 - t^2 u");
        os << "N_1 " << z.numerators[1].str("u");
    });
    run_claim(out, "sqrt-family d1 e2 big shtuka relations", [&](std::ostringstream& os) {
        Motive m = base_extend(sqrt_family(3, 1), 2);
        LatticeChain ch = infinity_filtration(m);
        BigShtuka bs = big_shtuka_infinity(m, ch);
        expect(bs.tau.rows == 4, "4x4 block matrix");
        os << "pi^l = z^k verified for l=" << ch.l << " k=" << ch.k;
    });

    run_claim(out, "unipotent q3 not semisimple", [&](std::ostringstream& os) {
        Motive m = unipotent_example(3);
        expect(!m.is_semisimple(), "mu is a square");
        const CharPolyData& cp = m.char_poly_data();
        const FieldDescriptor* fq = m.coeff_field();
        // mu = (x - (1 - t))^2
        XPoly lin(fq, {Poly::x(fq) - Poly::one(fq), Poly::one(fq)}); // x - (1 - t) = x + (t - 1)
        expect(cp.mu == lin * lin, "mu = (x - (1 - t))^2");
        os << "mu " << cp.mu.str();
    });
    run_claim(out, "unipotent q3 semisimplification degree 3", [&](std::ostringstream& os) {
        Motive m = unipotent_example(3);
        int deg = semisimplification_degree(m);
        expect(deg == 3, "smallest p-power extension");
        Motive mm = base_extend(m, 3);
        HomBasis hb = solve_hom(mm, mm);
        expect(hb.rank == 4, "End dimension 4 after extension");
        os << "degree " << deg << ", End rank " << hb.rank;
    });
    run_claim(out, "unipotent q3 kernel and image", [&](std::ostringstream& os) {
        Motive m = unipotent_example(3);
        const FieldDescriptor* L = m.base_field();
        PolyMat P(L, 1, 2);
        P.at(0, 0) = Poly::one(L);
        Motive line = scalar_motive(3, 1, m.theta().encoding(), {1, 2}); // 1 - t = 1 + 2t
        Morphism proj(m, line, P);
        KernelImage ki = kernel_image(proj);
        expect(ki.image.has_value() && ki.image->rank() == 1, "image rank 1");
        expect(ki.image->tau().at(0, 0) == line.tau().at(0, 0), "image tau = 1 - zeta t");
        expect(ki.kernel.has_value() && ki.kernel->rank() == 1, "kernel rank 1");
        expect(ki.kernel->tau().at(0, 0) == line.tau().at(0, 0), "kernel tau = 1 - zeta t");
        os << "image tau " << ki.image->tau().at(0, 0).str();
    });

    run_claim(out, "biquadratic q3 irreducible over Q", [&](std::ostringstream& os) {
        Motive m = biquadratic_example(3, 1, 1);
        const CharPolyData& cp = m.char_poly_data();
        expect(cp.factorization.size() == 1 && cp.factorization[0].second == 1, "chi irreducible");
        expect(cp.mu == cp.chi, "mu = chi");
        expect(hom_dimension(m, m) == 4, "[E : Q] = 4");
        os << "mu " << cp.mu.str();
    });
    run_claim(out, "biquadratic q3 quadratic extension invariants", [&](std::ostringstream& os) {
        Motive m = base_extend(biquadratic_example(3, 1, 1), 2);
        EndAlgebraReport rep = hasse_invariants(m);
        expect(rep.components.size() == 1, "one component");
        const AlgebraComponent& c = rep.components[0];
        expect(c.center_degree == 2 && c.multiplicity == 2, "[F : Q] = 2, m = 2");
        expect(c.dim_over_center == 4, "F-dimension 4");
        int inf_half = 0, eps_zero = 0;
        for (const auto& pi : c.invariants) {
            if (pi.base.infinite && pi.invariant == Rat(1, 2)) ++inf_half;
            if (!pi.base.infinite && pi.invariant == Rat(0)) ++eps_zero;
        }
        expect(inf_half == 2, "two infinite places with invariant 1/2");
        expect(eps_zero == 2, "two characteristic places with invariant 0");
        expect(c.division_algebra, "division algebra");
        expect(is_simple(m), "simple");
        os << "index " << c.index;
    });
    run_claim(out, "biquadratic q2 ramified infinite place", [&](std::ostringstream& os) {
        Motive m = base_extend(biquadratic_example(2, 1, 1), 2);
        EndAlgebraReport rep = hasse_invariants(m);
        expect(rep.components.size() == 1, "one component");
        const AlgebraComponent& c = rep.components[0];
        int inf_places = 0;
        for (const auto& pi : c.invariants)
            if (pi.base.infinite) {
                ++inf_places;
                expect(pi.e == 2 && pi.f == 1, "infinity ramifies");
                expect(pi.invariant == Rat(0), "invariant 0");
            }
        expect(inf_places == 1, "single infinite place");
        expect(!c.division_algebra, "matrix algebra");
        os << "e " << 2;
    });
    run_claim(out, "biquadratic q5 inert infinite place", [&](std::ostringstream& os) {
        Motive m = base_extend(biquadratic_example(5, 2, 1), 2); // a = 2, a non-square in F_5
        EndAlgebraReport rep = hasse_invariants(m);
        expect(rep.components.size() == 1, "one component");
        const AlgebraComponent& c = rep.components[0];
        int inf_places = 0;
        for (const auto& pi : c.invariants)
            if (pi.base.infinite) {
                ++inf_places;
                expect(pi.e == 1 && pi.f == 2, "infinity inert");
                expect(pi.invariant == Rat(0), "invariant 0");
            }
        expect(inf_places == 1, "single infinite place");
        expect(c.index == 1 && c.multiplicity == 2, "M_2(F)");
        expect(!is_simple(m), "not simple");
        os << "matrix algebra M_2 over the quadratic center";
    });

    run_claim(out, "drinfeld rank 2 simple", [&](std::ostringstream& os) {
        Motive m = drinfeld_example(3);
        MotiveReport rep = m.validate();
        expect(rep.r == 2 && rep.d == 1, "rank 2 dimension 1");
        expect(rep.weight == Rat(1, 2), "weight 1/2");
        expect(std::gcd(rep.r, rep.d) == 1, "primitive");
        expect(is_simple(m), "simple");
        os << "chi " << rep.chi.str();
    });
    run_claim(out, "drinfeld filtration", [&](std::ostringstream& os) {
        Motive m = drinfeld_example(3);
        LatticeChain ch = infinity_filtration(m);
        expect(ch.k == 1 && ch.l == 2, "(k, l) = (1, 2)");
        expect(ch.coker_dims == std::vector<int>({1, 1}), "cokernel dims (1, 1)");
        os << "k " << ch.k << " l " << ch.l;
    });

    return out;
}

} // namespace anderson::corpus
