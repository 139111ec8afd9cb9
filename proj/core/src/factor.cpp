#include "anderson/factor.hpp"

#include <algorithm>
#include <map>

#include "anderson/rng.hpp"

namespace anderson {

namespace {

Poly pth_power_mod(const Poly& a, const Poly& mod) { return divrem(pth_power(a), mod).second; }

Poly random_poly_below(const FieldDescriptor* fd, int deg_bound, Rng& rng) {
    std::vector<FieldElement> c;
    c.reserve(static_cast<size_t>(deg_bound));
    for (int i = 0; i < deg_bound; ++i) {
        std::vector<int32_t> coords(static_cast<size_t>(fd->n));
        for (auto& v : coords) v = static_cast<int32_t>(rng.below(static_cast<uint64_t>(fd->p)));
        c.emplace_back(fd, std::move(coords));
    }
    return Poly(fd, std::move(c));
}

// coefficient-wise p-th root; exponents must be divisible by p
Poly poly_pth_root(const Poly& a) {
    const FieldDescriptor* fd = a.field();
    if (a.is_zero()) return a;
    internal_check(a.deg() % fd->p == 0, "p-th root of non-p-power degree");
    std::vector<FieldElement> c(static_cast<size_t>(a.deg() / fd->p) + 1, FieldElement::zero(fd));
    for (int i = 0; i <= a.deg(); ++i) {
        if (a.coeff(i).is_zero()) continue;
        internal_check(i % fd->p == 0, "p-th root of non-sparse polynomial");
        c[static_cast<size_t>(i / fd->p)] = a.coeff(i).pth_root();
    }
    return Poly(fd, std::move(c));
}

bool poly_is_pth_power(const Poly& a) {
    const FieldDescriptor* fd = a.field();
    for (int i = 0; i <= a.deg(); ++i)
        if (!a.coeff(i).is_zero() && i % fd->p != 0) return false;
    return true;
}

// monic squarefree decomposition over a perfect field
std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& f) {
    const FieldDescriptor* fd = f.field();
    std::vector<std::pair<Poly, int>> res;
    if (f.deg() <= 0) return res;
    Poly fp = derivative(f);
    if (fp.is_zero()) {
        Poly w = poly_pth_root(f);
        for (auto& [h, m] : squarefree_decomposition(w)) res.emplace_back(h, m * static_cast<int>(fd->p));
        return res;
    }
    Poly c = gcd_monic(f, fp);
    Poly w = exact_div(f, c);
    int i = 1;
    while (w.deg() > 0) {
        Poly y = gcd_monic(w, c);
        Poly z = exact_div(w, y);
        if (z.deg() > 0) res.emplace_back(monic(z), i);
        w = y;
        c = exact_div(c, y);
        ++i;
    }
    if (c.deg() > 0)
        for (auto& [h, m] : squarefree_decomposition(c)) res.emplace_back(h, m);
    return res;
}

// distinct degree: (product of monic irreducibles of degree d, d)
std::vector<std::pair<Poly, int>> distinct_degree(const Poly& f) {
    const FieldDescriptor* fd = f.field();
    std::vector<std::pair<Poly, int>> res;
    Poly v = monic(f);
    Poly h = divrem(Poly::x(fd), v).second;
    int d = 0;
    while (v.deg() > 0) {
        ++d;
        if (2 * d > v.deg()) {
            res.emplace_back(v, v.deg());
            break;
        }
        for (int i = 0; i < fd->n; ++i) h = pth_power_mod(h, v); // h^(card K)
        Poly g = gcd_monic(v, h - Poly::x(fd));
        if (g.deg() > 0) {
            res.emplace_back(g, d);
            v = exact_div(v, g);
            h = divrem(h, v).second;
        }
    }
    return res;
}

// equal degree splitting, g = product of distinct irreducibles of degree d
void equal_degree(const Poly& g, int d, Rng& rng, std::vector<Poly>& out) {
    const FieldDescriptor* fd = g.field();
    if (g.deg() == d) {
        out.push_back(monic(g));
        return;
    }
    const int64_t p = fd->p;
    const int md = fd->n * d;
    while (true) {
        Poly h = random_poly_below(fd, g.deg(), rng);
        if (h.is_zero()) continue;
        Poly s;
        if (p == 2) {
            // trace map sum h^(2^i)
            Poly u = divrem(h, g).second;
            s = u;
            for (int i = 1; i < md; ++i) {
                u = pth_power_mod(u, g);
                s = s + u;
            }
            s = divrem(s, g).second;
        } else {
            // h^((card^d - 1)/2): base-p digits are all (p-1)/2
            Poly u = divrem(h, g).second;
            if (u.is_zero()) continue;
            Poly acc = Poly::one(fd);
            uint64_t half = static_cast<uint64_t>((p - 1) / 2);
            for (int i = 0; i < md; ++i) {
                acc = divrem(acc * pow_mod(u, half, g), g).second;
                u = pth_power_mod(u, g);
            }
            s = acc - Poly::one(fd);
        }
        Poly w = gcd_monic(g, s);
        if (w.deg() > 0 && w.deg() < g.deg()) {
            equal_degree(w, d, rng, out);
            equal_degree(exact_div(g, w), d, rng, out);
            return;
        }
    }
}

bool poly_less(const Poly& a, const Poly& b) {
    if (a.deg() != b.deg()) return a.deg() < b.deg();
    for (int i = a.deg(); i >= 0; --i) {
        uint64_t ea = a.coeff(i).encoding(), eb = b.coeff(i).encoding();
        if (ea != eb) return ea < eb;
    }
    return false;
}

} // namespace

std::vector<std::pair<Poly, int>> factor_univariate(const Poly& f) {
    internal_check(f.deg() >= 0, "factorization of zero");
    std::vector<std::pair<Poly, int>> res;
    if (f.deg() == 0) return res;
    Rng rng;
    for (auto& [s, m] : squarefree_decomposition(monic(f))) {
        for (auto& [g, d] : distinct_degree(s)) {
            std::vector<Poly> irr;
            equal_degree(g, d, rng, irr);
            for (auto& h : irr) res.emplace_back(h, m);
        }
    }
    std::sort(res.begin(), res.end(), [](const auto& a, const auto& b) { return poly_less(a.first, b.first); });
    return res;
}

std::vector<FieldElement> find_roots(const Poly& f) {
    std::vector<FieldElement> roots;
    for (auto& [h, m] : factor_univariate(f))
        if (h.deg() == 1) roots.push_back(-h.coeff(0));
    return roots;
}

bool is_irreducible(const Poly& f) {
    const FieldDescriptor* fd = f.field();
    int n = f.deg();
    if (n <= 0) return false;
    if (n == 1) return true;
    Poly fm = monic(f);
    // x^(card^n) == x mod f, and gcd(x^(card^(n/l)) - x, f) = 1 for primes l | n
    std::vector<Poly> frob_chain; // x^(card^k) mod f for k = 0..n
    Poly h = divrem(Poly::x(fd), fm).second;
    frob_chain.push_back(h);
    for (int k = 1; k <= n; ++k) {
        for (int i = 0; i < fd->n; ++i) h = pth_power_mod(h, fm);
        frob_chain.push_back(h);
    }
    if (frob_chain[static_cast<size_t>(n)] != frob_chain[0]) return false;
    for (int l = 2; l <= n; ++l) {
        if (n % l) continue;
        bool lp = true;
        for (int dd = 2; dd * dd <= l; ++dd)
            if (l % dd == 0) { lp = false; break; }
        if (!lp) continue;
        Poly g = gcd_monic(fm, frob_chain[static_cast<size_t>(n / l)] - Poly::x(fd));
        if (g.deg() != 0) return false;
    }
    return true;
}

Poly nth_monic_irreducible(const FieldDescriptor* fd, int k) {
    uint64_t card = fd->card_small();
    for (int d = 1;; ++d) {
        // enumerate monic degree-d polynomials by encoding value
        uint64_t limit = 1;
        for (int i = 0; i < d; ++i) limit *= card;
        for (uint64_t v = 0; v < limit; ++v) {
            std::vector<FieldElement> c;
            uint64_t x = v;
            for (int i = 0; i < d; ++i) {
                c.push_back(FieldElement::from_encoding(fd, x % card));
                x /= card;
            }
            c.push_back(FieldElement::one(fd));
            Poly f(fd, std::move(c));
            if (is_irreducible(f)) {
                if (k == 0) return f;
                --k;
            }
        }
    }
}

// ------------------------------------------------------------------
// factorization over Q = F_q(t)
// ------------------------------------------------------------------

namespace {

Poly truncate_deg(const Poly& a, int prec) {
    if (a.deg() < prec) return a;
    std::vector<FieldElement> c(a.coeffs().begin(), a.coeffs().begin() + prec);
    return Poly(a.field(), std::move(c));
}

XPoly trunc_x(const XPoly& a, int prec) {
    std::vector<Poly> c;
    c.reserve(a.coeffs().size());
    for (const auto& v : a.coeffs()) c.push_back(truncate_deg(v, prec));
    return XPoly(a.field(), std::move(c));
}

XPoly mul_trunc(const XPoly& a, const XPoly& b, int prec) { return trunc_x(a * b, prec); }

// x-polynomial with scalar coefficients -> bivariate
XPoly lift_const(const Poly& a) {
    std::vector<Poly> c;
    for (const auto& v : a.coeffs()) c.push_back(Poly::constant(v));
    return XPoly(a.field(), std::move(c));
}

struct HenselPair {
    XPoly g, h, s, t; // f = g h, s g + t h = 1 at current precision
};

// quadratic lifting of a monic factorization with Bezout data
// lift f = g h with s g + t h = 1 from one precision to the next
void hensel_step(const XPoly& f, HenselPair& P, int to) {
    const int prec = to;
    XPoly e = trunc_x(f - P.g * P.h, prec);
    auto [q, r] = divrem_monic(trunc_x(P.s * e, prec), P.h);
    XPoly gs = trunc_x(P.g + P.t * e + q * P.g, prec);
    XPoly hs = trunc_x(P.h + r, prec);
    internal_check(gs.deg() == P.g.deg() && gs.is_monic(), "lift lost monicity");
    XPoly b = trunc_x(P.s * gs + P.t * hs - XPoly::one(f.field()), prec);
    auto [cq, cd] = divrem_monic(trunc_x(P.s * b, prec), hs);
    XPoly ss = trunc_x(P.s - cd, prec);
    XPoly ts = trunc_x(P.t - P.t * b - cq * gs, prec);
    P.g = gs;
    P.h = hs;
    P.s = ss;
    P.t = ts;
}

// lift the factor list (coprime monic polys over K, product f0 at z=0) to a
// factorization of f mod z^prec
void hensel_tree(const XPoly& f, const std::vector<Poly>& locals, int lo, int hi, int prec,
                 std::vector<XPoly>& out) {
    const FieldDescriptor* fd = f.field();
    if (hi - lo == 1) {
        out.push_back(trunc_x(f, prec));
        return;
    }
    int mid = (lo + hi) / 2;
    Poly g0 = Poly::one(fd), h0 = Poly::one(fd);
    for (int i = lo; i < mid; ++i) g0 = g0 * locals[static_cast<size_t>(i)];
    for (int i = mid; i < hi; ++i) h0 = h0 * locals[static_cast<size_t>(i)];
    Poly bg, bs, bt;
    xgcd(g0, h0, bg, bs, bt);
    internal_check(bg.is_one(), "local factors not coprime");
    HenselPair P{lift_const(g0), lift_const(h0), lift_const(bs), lift_const(bt)};
    int cur = 1;
    while (cur < prec) {
        int nxt = std::min(2 * cur, prec);
        hensel_step(trunc_x(f, nxt), P, nxt);
        cur = nxt;
    }
    internal_check(trunc_x(f - P.g * P.h, prec).is_zero(), "lift does not multiply back");
    hensel_tree(P.g, locals, lo, mid, prec, out);
    hensel_tree(P.h, locals, mid, hi, prec, out);
}

// substitute z -> t - c and project the coefficients into the base field
std::optional<XPoly> descend(const XPoly& cand, const FieldElement& c, const FieldDescriptor* base) {
    std::vector<Poly> out;
    for (const auto& coef : cand.coeffs()) {
        Poly in_t = taylor_shift(coef, -c); // P(z) with z = t - c
        auto pr = project_poly(in_t, base);
        if (!pr) return std::nullopt;
        out.push_back(*pr);
    }
    return XPoly(base, std::move(out));
}

// w monic squarefree with squarefree separable factors over F_q(t)
std::vector<XPoly> factor_squarefree_separable(const XPoly& w) {
    const FieldDescriptor* base = w.field();
    std::vector<XPoly> res;
    if (w.deg() == 1) {
        res.push_back(w);
        return res;
    }
    if (w.deg_t() <= 0) {
        // constant in t: plain finite field factorization
        std::vector<FieldElement> cc;
        for (const auto& c : w.coeffs()) cc.push_back(c.is_zero() ? FieldElement::zero(base) : c.coeff(0));
        for (auto& [h, m] : factor_univariate(Poly(base, std::move(cc)))) {
            internal_check(m == 1, "squarefree input");
            res.push_back(lift_const(h));
        }
        return res;
    }

    // evaluation point: first (s, c) in canonical order keeping the
    // specialization squarefree
    const FieldDescriptor* K = nullptr;
    FieldElement c0;
    Poly wbar(base);
    for (int s = 1; K == nullptr; ++s) {
        const FieldDescriptor* Ks = fields::get(base->p, base->n * s);
        uint64_t card = Ks->card_small();
        for (uint64_t enc = 0; enc < card; ++enc) {
            FieldElement c = FieldElement::from_encoding(Ks, enc);
            std::vector<FieldElement> values;
            for (const auto& coef : w.coeffs()) values.push_back(eval(map_into(coef, Ks), c));
            Poly wb(Ks, std::move(values));
            if (wb.deg() != w.deg()) continue; // cannot happen for monic w
            if (gcd_monic(wb, derivative(wb)).is_one()) {
                K = Ks;
                c0 = c;
                wbar = wb;
                break;
            }
        }
        internal_check(s < 16, "no squarefree specialization found");
    }

    std::vector<Poly> locals;
    for (auto& [h, m] : factor_univariate(wbar)) {
        internal_check(m == 1, "specialization not squarefree");
        locals.push_back(h);
    }
    if (locals.size() == 1) {
        res.push_back(w);
        return res;
    }

    // shift to z = t - c0 over K and lift to precision deg_t(w) + 1
    const int prec = w.deg_t() + 1;
    std::vector<Poly> shifted;
    for (const auto& coef : w.coeffs()) shifted.push_back(taylor_shift(map_into(coef, K), c0));
    XPoly wz(K, std::move(shifted));
    std::vector<XPoly> lifted;
    hensel_tree(trunc_x(wz, prec), locals, 0, static_cast<int>(locals.size()), prec, lifted);

    // recombination: minimal subsets, cardinality then lexicographic order
    std::vector<bool> used(lifted.size(), false);
    XPoly wcur = w;
    size_t remaining = lifted.size();
    int cnt = 1;
    while (remaining > 0) {
        if (static_cast<size_t>(cnt) > remaining) break;
        // iterate subsets of size cnt over unused indices
        std::vector<int> avail;
        for (size_t i = 0; i < lifted.size(); ++i)
            if (!used[i]) avail.push_back(static_cast<int>(i));
        int n = static_cast<int>(avail.size());
        std::vector<int> idx(static_cast<size_t>(cnt));
        for (int i = 0; i < cnt; ++i) idx[static_cast<size_t>(i)] = i;
        bool accepted = false;
        while (true) {
            XPoly cand = XPoly::one(K);
            for (int i = 0; i < cnt; ++i) cand = mul_trunc(cand, lifted[static_cast<size_t>(avail[static_cast<size_t>(idx[static_cast<size_t>(i)])])], prec);
            auto down = descend(cand, c0, base);
            if (down && down->is_monic()) {
                auto [q, r] = divrem_monic(wcur, *down);
                if (r.is_zero()) {
                    res.push_back(*down);
                    for (int i = 0; i < cnt; ++i) used[static_cast<size_t>(avail[static_cast<size_t>(idx[static_cast<size_t>(i)])])] = true;
                    remaining -= static_cast<size_t>(cnt);
                    wcur = q;
                    accepted = true;
                    break;
                }
            }
            // next subset
            int i = cnt - 1;
            while (i >= 0 && idx[static_cast<size_t>(i)] == n - cnt + i) --i;
            if (i < 0) break;
            ++idx[static_cast<size_t>(i)];
            for (int j = i + 1; j < cnt; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
        }
        if (!accepted) ++cnt;
    }
    internal_check(wcur.deg() == 0 && remaining == 0, "recombination incomplete");
    return res;
}

bool coeff_is_pth_power(const XPoly& h) {
    for (const auto& c : h.coeffs())
        if (!poly_is_pth_power(c)) return false;
    return true;
}

XPoly coeffwise_pth_root(const XPoly& h) {
    std::vector<Poly> c;
    for (const auto& v : h.coeffs()) c.push_back(poly_pth_root(v));
    return XPoly(h.field(), std::move(c));
}

bool xpoly_less(const XPoly& a, const XPoly& b) {
    if (a.deg() != b.deg()) return a.deg() < b.deg();
    if (a.deg_t() != b.deg_t()) return a.deg_t() < b.deg_t();
    for (int i = a.deg(); i >= 0; --i) {
        const Poly pa = a.coeff(i), pb = b.coeff(i);
        if (pa.deg() != pb.deg()) return pa.deg() < pb.deg();
        for (int j = pa.deg(); j >= 0; --j) {
            uint64_t ea = pa.coeff(j).encoding(), eb = pb.coeff(j).encoding();
            if (ea != eb) return ea < eb;
        }
    }
    return false;
}

} // namespace

std::vector<std::pair<XPoly, int>> factor_over_A(const XPoly& f) {
    const FieldDescriptor* base = f.field();
    const int64_t p = base->p;
    check(f.is_monic(), Errc::internal, "factorization input must be monic in x");
    std::vector<std::pair<XPoly, int>> res;
    if (f.deg() == 0) return res;
    XPoly rem = f;
    XPoly fx = derivative_x(f);
    if (!fx.is_zero()) {
        XPoly c = gcd_monic_x(f, fx);
        XPoly w = exact_div_monic(f, c);
        if (w.deg() > 0) {
            for (auto& h : factor_squarefree_separable(w)) {
                int m = 0;
                while (true) {
                    auto [q, r] = divrem_monic(rem, h);
                    if (!r.is_zero()) break;
                    rem = q;
                    ++m;
                }
                internal_check(m >= 1, "factor does not divide input");
                res.emplace_back(h, m);
            }
        }
    }
    if (rem.deg() > 0) {
        // remaining factors live in Q[x^p]
        XPoly F = deflate(rem, p);
        for (auto& [H, M] : factor_over_A(F)) {
            if (coeff_is_pth_power(H)) {
                res.emplace_back(coeffwise_pth_root(H), M * static_cast<int>(p));
            } else {
                res.emplace_back(inflate(H, p), M);
            }
        }
    }
    std::sort(res.begin(), res.end(), [](const auto& a, const auto& b) { return xpoly_less(a.first, b.first); });
    return res;
}

std::vector<std::pair<XPoly, int>> factor_over_A(const XPoly& f_over_L, const FieldDescriptor* qdesc) {
    XPoly f = project_to_subfield(f_over_L, qdesc);
    return factor_over_A(f);
}

bool is_irreducible_over_A(const XPoly& f) {
    auto fac = factor_over_A(f);
    return fac.size() == 1 && fac[0].second == 1 && fac[0].first.deg() == f.deg();
}

} // namespace anderson
