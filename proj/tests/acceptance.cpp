#include <doctest.h>

#include <cstdio>
#include <numeric>

#include "anderson/algebra.hpp"
#include "anderson/corpus.hpp"
#include "anderson/linalg.hpp"
#include "anderson/local.hpp"
#include "anderson/rng.hpp"

// Acceptance suite: every criterion checks exact equalities and prints one
// pass/fail line.

using namespace anderson;
using namespace anderson::corpus;

namespace {

struct Criterion {
    const char* name;
    bool pass = true;
    Criterion(const char* n) : name(n) {}
    ~Criterion() { std::printf("[%s] %s\n", pass ? "PASS" : "FAIL", name); }
    void expect(bool ok, const char* what) {
        if (!ok) {
            pass = false;
            FAIL_CHECK(what);
        }
        CHECK(ok);
    }
};

const FieldDescriptor* F3 = fields::get(3, 1);

// random valid motives assembled from weight-matched companion blocks and a
// constant change of basis
struct Sampler {
    Rng rng;
    explicit Sampler(uint64_t seed) : rng(seed) {}

    PolyMat companion_block(const FieldDescriptor* L, const FieldElement& theta, int rb, int db) {
        PolyMat b(L, rb, rb);
        for (int i = 0; i + 1 < rb; ++i) b.at(i + 1, i) = Poly::one(L);
        Poly lin = Poly::x(L) - Poly::constant(theta);
        Poly corner = Poly::one(L);
        for (int i = 0; i < db; ++i) corner = corner * lin;
        FieldElement u;
        do {
            u = FieldElement::from_encoding(L, rng.below(L->card_small()));
        } while (u.is_zero());
        b.at(0, rb - 1) = corner * u;
        return b;
    }

    Motive sample(int64_t q, int e, int rmax, int dtmax, int qa) {
        const FieldDescriptor* L = fields::get(q, qa * e); // q prime here
        FieldElement theta = FieldElement::from_encoding(L, rng.below(L->card_small()));
        int r = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(rmax)));
        // weight-matched block partitions with block t-degrees within dtmax
        std::vector<std::vector<std::pair<int, int>>> options;
        for (int d = 1; d <= dtmax; ++d) options.push_back({{r, d}});
        if (r == 2) {
            for (int d = 1; d <= dtmax; ++d) options.push_back({{1, d}, {1, d}});
        }
        if (r == 3) {
            for (int d = 1; d <= dtmax; ++d) options.push_back({{1, d}, {1, d}, {1, d}});
            if (dtmax >= 2) options.push_back({{1, 1}, {2, 2}});
        }
        auto blocks = options[static_cast<size_t>(rng.below(options.size()))];
        PolyMat T(L, 0, 0);
        bool first = true;
        for (auto& [rb, db] : blocks) {
            PolyMat b = companion_block(L, theta, rb, db);
            T = first ? b : block_diag(T, b);
            first = false;
        }
        // conjugate by a random constant unimodular matrix
        PolyMat u = PolyMat::identity(L, r);
        for (int it = 0; it < 2 * r; ++it) {
            int i = static_cast<int>(rng.below(static_cast<uint64_t>(r)));
            int j = static_cast<int>(rng.below(static_cast<uint64_t>(r)));
            if (i == j) continue;
            PolyMat el = PolyMat::identity(L, r);
            el.at(i, j) = Poly::constant(FieldElement::from_encoding(L, rng.below(L->card_small())));
            u = u * el;
        }
        PolyMat uinv = scaled_inverse(u, Poly::one(L));
        Motive m(q, e, theta, u * T * sigma_mat(uinv, qa));
        m.validate();
        return m;
    }

    PolyMat conjugator(const Motive& m) {
        const FieldDescriptor* L = m.base_field();
        PolyMat u = PolyMat::identity(L, m.rank());
        for (int it = 0; it < 2 * m.rank() + 1; ++it) {
            int i = static_cast<int>(rng.below(static_cast<uint64_t>(m.rank())));
            int j = static_cast<int>(rng.below(static_cast<uint64_t>(m.rank())));
            if (i == j) continue;
            PolyMat el = PolyMat::identity(L, m.rank());
            el.at(i, j) = Poly::constant(FieldElement::from_encoding(L, rng.below(L->card_small())));
            u = u * el;
        }
        return u;
    }
};

} // namespace

TEST_CASE("criterion 1: the rank-2 antidiagonal family") {
    Criterion cr("criterion 1: rank-2 antidiagonal family, both base fields");
    for (int d = 1; d <= 3; ++d) {
        Motive m = sqrt_family(3, d);
        MotiveReport rep = m.validate();
        XPoly want(F3, {-Poly::one(F3).shifted(d), Poly::zero(F3), Poly::one(F3)});
        cr.expect(rep.chi == want && rep.mu == want, "chi = mu = x^2 - t^d over F_q");
        cr.expect(rep.semisimple, "semisimple over F_3 for every d");
        if (d % 2 == 1) {
            HomBasis hb = solve_hom(m, m);
            cr.expect(hb.rank == 2, "End dimension 2 for odd d");
        }
        // quadratic extension
        Motive m2 = base_extend(m, 2);
        XPoly lin(F3, {-Poly::one(F3).shifted(d), Poly::one(F3)});
        cr.expect(m2.char_poly_data().chi == lin * lin, "chi = (x - t^d)^2 over F_{q^2}");
        EndAlgebraReport rep2 = hasse_invariants(m2);
        cr.expect(rep2.dim_q == 4, "dim_Q E = 4 over F_{q^2}");
        Rat inv = mod_one(Rat(d, 2));
        for (const auto& pi : rep2.components[0].invariants)
            cr.expect(pi.invariant == inv, "inv = d/2 mod 1 at both special places");
        cr.expect(is_simple(m2) == (d % 2 == 1), "simple over F_{q^2} iff d odd");
    }
    // characteristic 2 check at d = 2
    cr.expect(!sqrt_family(2, 2).is_semisimple(), "q = 2, d = 2 is not semisimple");
    cr.expect(sqrt_family(3, 2).is_semisimple(), "q = 3, d = 2 is semisimple");
}

TEST_CASE("criterion 2: the rank-4 biquadratic family") {
    Criterion cr("criterion 2: rank-4 biquadratic family, three splitting behaviors");
    // q = 3, a = b = 1: split infinite place
    {
        Motive m = base_extend(biquadratic_example(3, 1, 1), 2);
        EndAlgebraReport rep = hasse_invariants(m);
        cr.expect(rep.components.size() == 1, "one component");
        const AlgebraComponent& c = rep.components[0];
        cr.expect(c.center_degree == 2, "[F : Q] = 2");
        cr.expect(c.dim_over_center == 4, "F-dimension 4");
        int inf_half = 0, eps_zero = 0, inf_total = 0, eps_total = 0;
        for (const auto& pi : c.invariants) {
            if (pi.base.infinite) {
                ++inf_total;
                if (pi.invariant == Rat(1, 2)) ++inf_half;
            } else {
                ++eps_total;
                if (pi.invariant == Rat(0)) ++eps_zero;
            }
        }
        cr.expect(inf_total == 2 && inf_half == 2, "infinity splits with invariants 1/2, 1/2");
        cr.expect(eps_total == 2 && eps_zero == 2, "characteristic place splits with invariants 0, 0");
        cr.expect(c.division_algebra, "E is a division algebra");
        // mu over F_{q^2} is the quadratic x^2 - b^2 x - a t^2
        XPoly mu(F3, {-(Poly::x(F3) * Poly::x(F3)), -Poly::one(F3), Poly::one(F3)});
        cr.expect(m.char_poly_data().mu == mu, "mu = x^2 - x - t^2");
    }
    // q = 2: ramified infinite place
    {
        Motive m = base_extend(biquadratic_example(2, 1, 1), 2);
        EndAlgebraReport rep = hasse_invariants(m);
        int inf_count = 0;
        for (const auto& pi : rep.components[0].invariants)
            if (pi.base.infinite) {
                ++inf_count;
                cr.expect(pi.e == 2, "infinity ramifies");
                cr.expect(pi.invariant == Rat(0), "ramified invariant 0");
            }
        cr.expect(inf_count == 1, "single infinite place");
    }
    // q = 5 with a = 2 a non-square: inert infinite place, E = M_2(F)
    {
        Motive m = base_extend(biquadratic_example(5, 2, 1), 2);
        EndAlgebraReport rep = hasse_invariants(m);
        int inf_count = 0;
        for (const auto& pi : rep.components[0].invariants)
            if (pi.base.infinite) {
                ++inf_count;
                cr.expect(pi.e == 1 && pi.f == 2, "infinity inert");
                cr.expect(pi.invariant == Rat(0), "inert invariant 0");
            }
        cr.expect(inf_count == 1, "single infinite place");
        cr.expect(rep.components[0].index == 1 && rep.components[0].multiplicity == 2,
                  "E is a matrix algebra M_2(F)");
    }
}

TEST_CASE("criterion 3: the non-semisimple unipotent family") {
    Criterion cr("criterion 3: unipotent family over F_3 and its splitting field");
    Motive m = unipotent_example(3, 1);
    cr.expect(!m.is_semisimple(), "not semisimple over F_3");
    XPoly lin(F3, {Poly::x(F3) - Poly::one(F3), Poly::one(F3)}); // x - (1 - t)
    cr.expect(m.char_poly_data().mu == lin * lin, "mu = (x - (1 - t))^2");
    cr.expect(semisimplification_degree(m) == 3, "semisimplification degree 3");
    Motive m27 = base_extend(m, 3);
    cr.expect(m27.is_semisimple(), "semisimple over F_27");
    HomBasis hb = solve_hom(m27, m27);
    cr.expect(hb.rank == 4, "End dimension 4 over F_27");
}

TEST_CASE("criterion 4: the rank-2 dimension-1 module") {
    Criterion cr("criterion 4: rank-2 dimension-1 module and its filtration");
    Motive m = drinfeld_example(3, 1, 0);
    MotiveReport rep = m.validate();
    cr.expect(rep.r == 2 && rep.d == 1, "rank 2, dimension 1");
    cr.expect(rep.weight == Rat(1, 2), "weight 1/2");
    cr.expect(std::gcd(rep.r, rep.d) == 1 && is_simple(m), "primitive, hence simple");
    LatticeChain ch = infinity_filtration(m);
    cr.expect(ch.k == 1 && ch.l == 2, "(k, l) = (1, 2)");
    cr.expect(ch.coker_dims == std::vector<int>({1, 1}), "cokernel dimensions (1, 1)");
}

TEST_CASE("criterion 5: property suite on 200 random motives") {
    Criterion cr("criterion 5: property suite on 200 random motives");
    Sampler sampler(2024);
    int made = 0;
    for (int64_t q : {2, 3}) {
        for (int e = 1; e <= 2; ++e) {
            for (int i = 0; i < 50; ++i) {
                Motive m = sampler.sample(q, e, 3, 2, 1);
                ++made;
                const FieldDescriptor* L = m.base_field();
                const CharPolyData& cp = m.char_poly_data();
                cr.expect(cp.chi.field() == m.coeff_field(), "chi has coefficients in A");

                // sigma-conjugacy invariance
                PolyMat u = sampler.conjugator(m);
                PolyMat uinv = scaled_inverse(u, Poly::one(L));
                Motive mc(m.q(), m.e(), m.theta(), u * m.tau() * sigma_mat(uinv, m.q_exp()));
                cr.expect(mc.char_poly_data().chi == cp.chi, "conjugation preserves chi");
                cr.expect(mc.char_poly_data().mu == cp.mu, "conjugation preserves mu");
                cr.expect(mc.zeta().numerators == m.zeta().numerators, "conjugation preserves zeta");
                cr.expect(mc.slopes_at_infinity() == m.slopes_at_infinity(),
                          "conjugation preserves the slopes");

                cr.expect(m.rh_check(), "single slope at infinity");

                // zeta series coefficients
                auto counts = zeta_point_counts(m.zeta(), 3);
                PolyMat pw = PolyMat::identity(L, m.rank());
                for (int ii = 1; ii <= 3; ++ii) {
                    pw = pw * m.frobenius_matrix();
                    Poly want = det(PolyMat::identity(L, m.rank()) - pw);
                    auto down = project_poly(want, m.coeff_field());
                    cr.expect(down.has_value() && counts[static_cast<size_t>(ii - 1)] == *down,
                              "a_i = det(1 - Pi^i)");
                }

                // norms and degrees on sampled endomorphisms
                Morphism pi(m, m, m.frobenius_matrix());
                Poly a = Poly::from_encodings(m.coeff_field(), {1, sampler.rng.below(static_cast<uint64_t>(q))});
                Morphism f = Morphism::scalar(m, a);
                Morphism g = f + pi;
                cr.expect(norm_raw(compose(f, pi)) == norm_raw(f) * norm_raw(pi),
                          "N is multiplicative");
                for (const Morphism& h : {f, g, pi}) {
                    if (!is_isogeny(h)) continue;
                    IsogenyData data = isogeny_data(h);
                    cr.expect(data.degree.deg() == det(h.matrix()).deg(),
                              "dim A/deg(f) = deg det F");
                    if (m.is_semisimple())
                        cr.expect(data.degree == norm_monic(h), "deg(f) = monic N(f)");
                }
                IsogenyData dpi = isogeny_data(pi);
                Poly eps_pow = Poly::one(m.coeff_field());
                for (int ii = 0; ii < m.dim() * m.e() / m.epsilon().deg(); ++ii)
                    eps_pow = eps_pow * m.epsilon();
                cr.expect(dpi.degree == eps_pow, "deg(pi) = eps^(d e / deg eps)");
            }
        }
    }
    cr.expect(made == 200, "200 samples");
}

TEST_CASE("criterion 6: solver equals the brute-force oracle") {
    Criterion cr("criterion 6: Hom solver vs exhaustive enumeration, 25 pairs");
    Sampler sampler(77);
    const FieldDescriptor* F2 = fields::get(2, 1);
    int done = 0;
    while (done < 25) {
        Motive a = sampler.sample(2, 1, 2, 1, 1);
        Motive b = sampler.sample(2, 1, 2, 1, 1);
        if (!(a.theta() == b.theta())) continue;
        ++done;
        HomBasis hb = solve_hom(a, b);
        // enumerate every F with deg_t <= 2
        const int bound = 2;
        const int cells = a.rank() * b.rank() * (bound + 1);
        uint64_t total = 1;
        for (int i = 0; i < cells; ++i) total *= 2;
        uint64_t sols = 0;
        for (uint64_t code = 0; code < total; ++code) {
            uint64_t c = code;
            PolyMat F(F2, b.rank(), a.rank());
            for (int i = 0; i < b.rank(); ++i)
                for (int j = 0; j < a.rank(); ++j) {
                    std::vector<uint64_t> enc;
                    for (int k = 0; k <= bound; ++k) {
                        enc.push_back(c % 2);
                        c /= 2;
                    }
                    F.at(i, j) = Poly::from_encodings(F2, enc);
                }
            PolyMat diff = F * a.tau() - b.tau() * sigma_mat(F, 1);
            if (diff.is_zero()) {
                ++sols;
                // containment: the solution reduces against the solver basis
                // via the F_2-dimension comparison below
            }
        }
        int dim = 0;
        for (int k = 0; k <= std::min(bound, hb.degree_bound); ++k)
            dim += hb.increments[static_cast<size_t>(k)];
        uint64_t solver_count = 1;
        for (int i = 0; i < dim; ++i) solver_count *= 2;
        cr.expect(solver_count == sols, "solution spaces agree at every degree <= 2");
    }
}

TEST_CASE("criterion 7: tate module suite") {
    Criterion cr("criterion 7: Tate modules at degree-1 places, 20 random motives");
    Sampler sampler(4243);
    int done = 0;
    while (done < 20) {
        int64_t q = done % 2 ? 2 : 3;
        int e = (done / 2) % 2 ? 2 : 1;
        Motive m = sampler.sample(q, e, done % 3 == 2 ? 3 : 2, 2, 1);
        // first degree-1 place away from the characteristic
        Place v = Place::finite(Poly::x(m.coeff_field()));
        for (int k = 0; v.prime == m.epsilon(); ++k) v = nth_finite_place(m.coeff_field(), k + 1);
        if (v.degree() != 1) continue;
        int n = done % 2 + 1;
        if (m.rank() == 3 && n == 2 && q == 3) n = 1; // keep the splitting search small
        TateModuleData td = tate_module(m, v, n);
        cr.expect(static_cast<int>(td.basis.size()) == m.rank(),
                  "fixed module is free of rank r over A/v^n");
        Poly vq = Poly::one(m.coeff_field());
        for (int i = 0; i < n; ++i) vq = vq * v.prime;
        PolyMat prod = td.frobenius * td.pi_action;
        for (auto& ee : prod.a) ee = divrem(ee, vq).second;
        cr.expect(prod == PolyMat::identity(m.coeff_field(), m.rank()),
                  "Frobenius matrix times Pi is the identity");

        // Hom mod v embeds into the commutant of the two Frobenius actions
        PolyMat uc = sampler.conjugator(m);
        PolyMat ucinv = scaled_inverse(uc, Poly::one(m.base_field()));
        Motive mp(m.q(), m.e(), m.theta(), uc * m.tau() * sigma_mat(ucinv, m.q_exp()));
        HomBasis hb = solve_hom(m, mp);
        TateModuleData tdm = tate_module(m, v, 1);
        TateModuleData tdp = tate_module(mp, v, 1, 64, 0);
        int common = std::lcm(tdm.splitting_degree, tdp.splitting_degree);
        tdm = tate_module(m, v, 1, 64, common);
        tdp = tate_module(mp, v, 1, 64, common);
        const FieldDescriptor* Lx = tdm.ext;
        const int64_t p = Lx->p;
        // coordinates of a vector over Lx mod the place
        auto coords = [&](const std::vector<Poly>& vec) {
            std::vector<int32_t> out;
            for (const auto& entry : vec) {
                FieldElement c0 = entry.coeff(0);
                for (int w = 0; w < Lx->n; ++w) out.push_back(c0.coeff(w));
            }
            return out;
        };
        // solve for the matrix of a hom on the two bases, over A/v = F_q
        FieldElement beta = fields::embed(FieldElement::gen(m.coeff_field()), Lx);
        FpMat basis_mat(static_cast<int>(mp.rank()) * Lx->n, mp.rank() * m.q_exp(), p);
        {
            int col = 0;
            for (int i = 0; i < mp.rank(); ++i)
                for (int b = 0; b < m.q_exp(); ++b) {
                    std::vector<Poly> w = tdp.basis[static_cast<size_t>(i)];
                    FieldElement scal = FieldElement::one(Lx);
                    for (int bb = 0; bb < b; ++bb) scal = scal * beta;
                    for (auto& entry : w) entry = entry * scal;
                    auto cc = coords(w);
                    for (size_t rw = 0; rw < cc.size(); ++rw) basis_mat.at(static_cast<int>(rw), col) = cc[rw];
                    ++col;
                }
        }
        std::vector<std::vector<int32_t>> images_flat;
        Poly vLx = map_into(v.prime, Lx);
        for (const auto& g : hb.basis) {
            PolyMat F = map_into(g.matrix(), Lx);
            FpMat X(mp.rank(), m.rank(), p); // matrix over F_q (q prime in the suite)
            bool ok = true;
            for (int j = 0; j < m.rank() && ok; ++j) {
                std::vector<Poly> img(static_cast<size_t>(mp.rank()), Poly::zero(Lx));
                for (int i = 0; i < mp.rank(); ++i)
                    for (int k = 0; k < m.rank(); ++k)
                        img[static_cast<size_t>(i)] =
                            divrem(img[static_cast<size_t>(i)] +
                                       F.at(i, k) * tdm.basis[static_cast<size_t>(j)][static_cast<size_t>(k)],
                                   vLx).second;
                auto sol = fp_solve(basis_mat, coords(img));
                cr.expect(sol.has_value(), "hom image lies in the target Tate module");
                if (!sol) { ok = false; break; }
                for (int i = 0; i < mp.rank(); ++i) X.at(i, j) = (*sol)[static_cast<size_t>(i) * static_cast<size_t>(m.q_exp())];
            }
            if (!ok) continue;
            // commutation with the Frobenius actions mod v
            auto red = [&](const PolyMat& A) {
                FpMat R(A.rows, A.cols, p);
                for (int i = 0; i < A.rows; ++i)
                    for (int j = 0; j < A.cols; ++j) {
                        Poly rr = divrem(A.at(i, j), v.prime).second;
                        R.at(i, j) = rr.is_zero() ? 0 : rr.coeff(0).coeff(0);
                    }
                return R;
            };
            FpMat fm = red(tdm.frobenius), fp = red(tdp.frobenius);
            for (int i = 0; i < mp.rank(); ++i)
                for (int j = 0; j < m.rank(); ++j) {
                    int64_t lhs = 0, rhs = 0;
                    for (int k = 0; k < m.rank(); ++k) lhs += int64_t(X.at(i, k)) * fm.at(k, j);
                    for (int k = 0; k < mp.rank(); ++k) rhs += int64_t(fp.at(i, k)) * X.at(k, j);
                    cr.expect((lhs - rhs) % p == 0, "hom commutes with the Frobenius actions");
                }
            images_flat.push_back([&] {
                std::vector<int32_t> flat;
                for (int i = 0; i < X.rows; ++i)
                    for (int j = 0; j < X.cols; ++j) flat.push_back(X.at(i, j));
                return flat;
            }());
        }
        // the embedding is injective modulo v: reductions stay independent
        if (!images_flat.empty()) {
            FpMat sp(static_cast<int>(images_flat.size()), static_cast<int>(images_flat[0].size()), p);
            for (size_t i = 0; i < images_flat.size(); ++i)
                for (size_t j = 0; j < images_flat[i].size(); ++j)
                    sp.at(static_cast<int>(i), static_cast<int>(j)) = images_flat[i][j];
            cr.expect(fp_rank(sp) == hb.rank, "Hom mod v embeds into the commutant");
        }
        ++done;
    }
}

TEST_CASE("criterion 8: isogeny criterion with witness and refutation") {
    Criterion cr("criterion 8: isogeny criterion, witness and exhaustive refutation");
    Motive m = sqrt_family(3, 2);
    Motive split = direct_sum(scalar_motive(3, 1, 0, {0, 2}), scalar_motive(3, 1, 0, {0, 1}));
    auto [eq, wit] = isogeny_equivalent(m, split);
    cr.expect(eq, "chi agreement for the split form");
    cr.expect(wit.has_value() && is_isogeny(*wit), "verified witness isogeny");

    Motive diag = direct_sum(scalar_motive(3, 1, 0, {0, 1}), scalar_motive(3, 1, 0, {0, 1}));
    auto [eq2, wit2] = isogeny_equivalent(m, diag);
    cr.expect(!eq2 && !wit2.has_value(), "distinct chi refuses equivalence");
    // exhaustive sweep over F_q-combinations of the full Hom space
    HomBasis hb = solve_hom(diag, m);
    cr.expect(hb.rank > 0, "a nonzero Hom space to sweep");
    const FieldDescriptor* L = m.base_field();
    uint64_t total = 1;
    for (int i = 0; i < hb.rank; ++i) total *= 3;
    for (uint64_t code = 0; code < total; ++code) {
        uint64_t c = code;
        PolyMat acc(L, 2, 2);
        for (int i = 0; i < hb.rank; ++i) {
            uint64_t ci = c % 3;
            c /= 3;
            if (ci)
                acc = acc + hb.basis[static_cast<size_t>(i)].matrix() *
                                Poly::constant(FieldElement::from_encoding(L, ci));
        }
        cr.expect(det(acc).is_zero(), "no combination has nonzero determinant");
    }
}
