#include "anderson/algebra.hpp"

#include <algorithm>
#include <numeric>

namespace anderson {

int r_value(const XPoly& f, const XPoly& g, const Place& w) {
    internal_check(f.field() == g.field(), "mismatched coefficient fields");
    auto ff = factor_over_A(f);
    auto gf = factor_over_A(g);
    int total = 0;
    for (const auto& [mu, mf] : ff) {
        for (const auto& [nu, ng] : gf) {
            if (!(mu == nu)) continue;
            // local degrees of the common factor at w
            int local = 0;
            if (!w.infinite && mu.deg_t() >= 0) {
                // unramified shortcut: squarefree reduction mod w factors with
                // the same degrees as the local splitting
                const FieldDescriptor* Fw = fields::get(f.field()->p, f.field()->n * w.degree());
                std::vector<FieldElement> red;
                bool ok = true;
                // reduce coefficients modulo the prime via its residue root
                Poly pk = map_into(w.prime, Fw);
                std::vector<FieldElement> roots = find_roots(pk);
                std::sort(roots.begin(), roots.end(), [](const FieldElement& a, const FieldElement& b) {
                    return a.encoding() < b.encoding();
                });
                if (!roots.empty()) {
                    FieldElement tbar = roots.front();
                    for (const auto& c : mu.coeffs()) red.push_back(eval(map_into(c, Fw), tbar));
                    Poly mubar(Fw, std::move(red));
                    if (mubar.deg() == mu.deg() && gcd_monic(mubar, derivative(mubar)).is_one()) {
                        for (auto& [h, mm] : factor_univariate(mubar)) local += h.deg() * mm;
                    } else {
                        ok = false;
                    }
                } else {
                    ok = false;
                }
                if (!ok) local = 0;
                if (ok) {
                    total += mf * ng * local;
                    continue;
                }
            }
            local = 0;
            for (const auto& pl : local_places(mu, w)) local += pl.e * pl.f;
            internal_check(local == mu.deg(), "local degrees do not sum to the factor degree");
            total += mf * ng * local;
        }
    }
    return total;
}

int hom_dimension(const Motive& m, const Motive& mp) {
    check(m.is_semisimple() && mp.is_semisimple(), Errc::not_semisimple,
          "dimension formula needs semisimple motives");
    if (m.weight() != mp.weight()) return 0;
    const FieldDescriptor* Fq = m.coeff_field();
    const XPoly& chi = m.char_poly_data().chi;
    const XPoly& chip = mp.char_poly_data().chi;
    for (int k = 0; k < 64; ++k) {
        Place w = nth_finite_place(Fq, k);
        if (w.prime == m.epsilon() || w.prime == mp.epsilon()) continue;
        try {
            return r_value(chi, chip, w);
        } catch (const Error& e) {
            if (e.code() != Errc::local_factor_indeterminate) throw;
        }
    }
    raise(Errc::local_factor_indeterminate, "no good comparison place found");
}

std::pair<bool, std::optional<Morphism>> isogeny_equivalent(const Motive& m, const Motive& mp) {
    check(m.q() == mp.q() && m.e() == mp.e() && m.theta() == mp.theta(), Errc::field_mismatch,
          "comparison requires equal base data");
    check(m.is_semisimple() && mp.is_semisimple(), Errc::not_semisimple,
          "isogeny criterion needs semisimple motives");
    if (!(m.char_poly_data().chi == mp.char_poly_data().chi)) return {false, std::nullopt};
    HomBasis hb = solve_hom(m, mp);
    const FieldDescriptor* Fq = m.coeff_field();
    const FieldDescriptor* L = m.base_field();
    const uint64_t card = Fq->card_small();
    const int rho = hb.rank;
    internal_check(rho >= 1, "equal chi but empty Hom");
    for (int degc = 0; degc <= 4; ++degc) {
        uint64_t total = 1;
        bool overflow = false;
        for (int i = 0; i < rho * (degc + 1); ++i) {
            total *= card;
            if (total > 5000000) { overflow = true; break; }
        }
        if (overflow) break;
        for (uint64_t code = 1; code < total; ++code) {
            uint64_t c = code;
            PolyMat acc(L, mp.rank(), m.rank());
            for (int i = 0; i < rho; ++i) {
                std::vector<uint64_t> enc;
                for (int dd = 0; dd <= degc; ++dd) {
                    enc.push_back(c % card);
                    c /= card;
                }
                Poly coeff = Poly::from_encodings(Fq, enc);
                if (coeff.is_zero()) continue;
                acc = acc + hb.basis[static_cast<size_t>(i)].matrix() * map_into(coeff, L);
            }
            if (!det(acc).is_zero()) {
                Morphism witness(m, mp, acc);
                internal_check(is_isogeny(witness), "witness is not an isogeny");
                return {true, witness};
            }
        }
    }
    raise(Errc::internal, "equal chi but no isogeny found in the sweep");
}

EndAlgebraReport hasse_invariants(const Motive& m) {
    check(m.is_semisimple(), Errc::not_semisimple, "invariants need a semisimple motive");
    const FieldDescriptor* Fq = m.coeff_field();
    const CharPolyData& cp = m.char_poly_data();
    EndAlgebraReport rep;
    rep.rank = m.rank();
    const int e = m.e();
    for (const auto& [mu, mult] : cp.factorization) {
        AlgebraComponent comp;
        comp.mu = mu;
        comp.multiplicity = mult;
        comp.center_degree = mu.deg();
        comp.dim_over_center = mult * mult;
        Place eps = Place::finite(m.epsilon());
        Place inf = Place::at_infinity(Fq);
        for (const Place& w : {inf, eps}) {
            for (const auto& pl : local_places(mu, w)) {
                PlaceInvariant pi;
                pi.base = w;
                pi.e = pl.e;
                pi.f = pl.f;
                pi.slope = pl.lambda;
                Rat inv = Rat(pl.f * w.degree(), 1) * Rat(pl.e, 1) * pl.lambda / Rat(e, 1);
                pi.invariant = mod_one(inv);
                comp.invariants.push_back(pi);
            }
        }
        // Brauer reciprocity within the component
        Rat sum(0);
        for (const auto& pi : comp.invariants) sum += pi.invariant;
        internal_check(mod_one(sum) == Rat(0), "component invariants do not sum to zero");
        long long idx = 1;
        for (const auto& pi : comp.invariants) idx = std::lcm(idx, pi.invariant.denominator());
        comp.index = static_cast<int>(idx);
        comp.division_algebra = comp.index == comp.multiplicity;
        rep.dim_q += comp.dim_over_center * comp.center_degree;
        rep.components.push_back(std::move(comp));
    }
    int total_deg = 0;
    for (const auto& c : rep.components) total_deg += c.multiplicity * c.center_degree;
    internal_check(total_deg == m.rank(), "component multiplicities do not fill the rank");
    internal_check(rep.dim_q >= m.rank() && rep.dim_q <= m.rank() * m.rank(),
                   "algebra dimension outside [r, r^2]");
    return rep;
}

bool is_simple(const Motive& m) {
    m.validate();
    if (std::gcd(m.rank(), m.dim()) == 1) return true; // primitive
    check(m.is_semisimple(), Errc::not_semisimple, "simplicity test needs semisimplicity");
    const CharPolyData& cp = m.char_poly_data();
    if (cp.factorization.size() != 1) return false;
    if (!(cp.mu == cp.factorization[0].first)) return false;
    EndAlgebraReport rep = hasse_invariants(m);
    return rep.components.size() == 1 && rep.components[0].division_algebra;
}

bool is_semisimple_algebra_consistent(const Motive& m) {
    if (!m.is_semisimple()) return true; // no algebra structure is claimed
    EndAlgebraReport rep = hasse_invariants(m);
    if (rep.dim_q < m.rank() || rep.dim_q > m.rank() * m.rank()) return false;
    for (const auto& comp : rep.components) {
        Rat sum(0);
        for (const auto& pi : comp.invariants) sum += pi.invariant;
        if (mod_one(sum) != Rat(0)) return false;
    }
    const CharPolyData& cp = m.char_poly_data();
    if (cp.factorization.size() == 1 && cp.factorization[0].second >= 1 &&
        cp.mu == cp.factorization[0].first) {
        // single-center case: h | r and dim = r^2 / h
        int h = cp.mu.deg();
        if (m.rank() % h != 0) return false;
        if (rep.dim_q * h != m.rank() * m.rank()) return false;
    }
    // a primitive motive is simple, hence its algebra is a division algebra
    if (std::gcd(m.rank(), m.dim()) == 1) {
        if (rep.components.size() != 1) return false;
        if (!rep.components[0].division_algebra) return false;
    }
    return true;
}

} // namespace anderson
