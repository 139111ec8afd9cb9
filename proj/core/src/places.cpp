#include "anderson/places.hpp"

#include <algorithm>

#include "anderson/factor.hpp"
#include "anderson/series.hpp"

namespace anderson {

std::string Place::str() const { return infinite ? "inf" : prime.str("t"); }

int place_valuation(const Poly& a, const Place& v) {
    internal_check(!a.is_zero(), "valuation of zero");
    if (v.infinite) return -a.deg();
    return valuation(a, v.prime);
}

NewtonPolygon newton_polygon(const XPoly& f, const Place& v) {
    internal_check(!f.is_zero(), "polygon of zero");
    check(place_valuation(f.lead(), v) == 0, Errc::internal,
          "leading coefficient must be a unit at the place");
    // points (i, v(a_i)) for nonzero coefficients
    std::vector<std::pair<int, long long>> pts;
    int i0 = -1;
    for (int i = 0; i <= f.deg(); ++i) {
        if (f.coeff(i).is_zero()) continue;
        if (i0 < 0) i0 = i;
        pts.emplace_back(i, place_valuation(f.coeff(i), v));
    }
    // lower convex hull, left to right
    std::vector<std::pair<int, long long>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            // keep b only if it lies strictly below the segment a-pt
            long long lhs = (b.second - a.second) * (pt.first - a.first);
            long long rhs = (pt.second - a.second) * (b.first - a.first);
            if (lhs < rhs) break;
            hull.pop_back();
        }
        hull.push_back(pt);
    }
    NewtonPolygon np;
    np.zero_root_multiplicity = i0;
    for (size_t k = 0; k + 1 < hull.size(); ++k) {
        Rat s(hull[k + 1].second - hull[k].second, hull[k + 1].first - hull[k].first);
        np.segments.push_back({s, hull[k + 1].first - hull[k].first});
    }
    return np;
}

namespace {

struct LocalPoly {
    // monic polynomial over a local field, coefficients as truncated Laurent
    // series; c[deg] = 1 is implicit in the callers' construction
    std::vector<Laurent> c;
    int deg() const { return static_cast<int>(c.size()) - 1; }
};

struct HullPoint {
    int i;
    int v;
};

std::vector<HullPoint> lower_hull(const LocalPoly& F) {
    std::vector<HullPoint> pts;
    for (int i = 0; i <= F.deg(); ++i) {
        const Laurent& b = F.c[static_cast<size_t>(i)];
        if (b.is_zero()) continue;
        pts.push_back({i, b.val()});
    }
    std::vector<HullPoint> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            long long lhs = static_cast<long long>(b.v - a.v) * (pt.i - a.i);
            long long rhs = static_cast<long long>(pt.v - a.v) * (b.i - a.i);
            if (lhs < rhs) break;
            hull.pop_back();
        }
        hull.push_back(pt);
    }
    return hull;
}

int64_t binom_mod_p(int n, int k, int64_t p) {
    // Pascal row, n small
    std::vector<int64_t> row(static_cast<size_t>(n) + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= n; ++i)
        for (int j = i; j >= 1; --j) row[static_cast<size_t>(j)] = (row[static_cast<size_t>(j)] + row[static_cast<size_t>(j - 1)]) % p;
    return row[static_cast<size_t>(k)];
}

// places of the monic local polynomial F (irreducible factors' (e, f, slope))
std::vector<LocalPlaceFactor> ore_places(const LocalPoly& F, int depth, int depth_cap) {
    const FieldDescriptor* K = F.c[0].field();
    std::vector<LocalPlaceFactor> out;
    const int n = F.deg();
    internal_check(n >= 1, "local factor of degree 0");
    if (n == 1) {
        const Laurent& b0 = F.c[0];
        check(!b0.is_zero(), Errc::precision_insufficient, "linear root vanishes to precision");
        out.push_back({1, 1, Rat(-b0.val())});
        return out;
    }
    check(!F.c[0].is_zero(), Errc::precision_insufficient, "constant term vanishes to precision");
    std::vector<HullPoint> hull = lower_hull(F);
    internal_check(hull.size() >= 2 && hull.front().i == 0 && hull.back().i == n, "degenerate hull");
    for (size_t s = 0; s + 1 < hull.size(); ++s) {
        const HullPoint p0 = hull[s], p1 = hull[s + 1];
        Rat slope(p1.v - p0.v, p1.i - p0.i);
        long long a = slope.numerator(), b = slope.denominator();
        int L = (p1.i - p0.i) / static_cast<int>(b);
        // residual polynomial from the lattice points on the segment
        std::vector<FieldElement> rc;
        for (int j = 0; j <= L; ++j) {
            int i = p0.i + j * static_cast<int>(b);
            long long ev = p0.v + static_cast<long long>(j) * a;
            const Laurent& bi = F.c[static_cast<size_t>(i)];
            if (bi.is_zero() || bi.val() > ev)
                rc.push_back(FieldElement::zero(K));
            else
                rc.push_back(bi.coeff(static_cast<int>(ev)));
        }
        Poly R(K, std::move(rc));
        internal_check(R.deg() == L, "residual degree mismatch");
        auto rf = factor_univariate(R);
        bool repeated = false;
        for (auto& [h, m] : rf)
            if (m > 1) repeated = true;
        if (!repeated) {
            for (auto& [h, m] : rf) out.push_back({static_cast<int>(b), h.deg(), slope});
            continue;
        }
        // refinement: a single degenerate slope-denominator-1 segment whose
        // residual is a power of one linear factor
        bool pure_linear_power = rf.size() == 1 && rf[0].first.deg() == 1 && rf[0].second == L;
        if (!(b == 1 && pure_linear_power && hull.size() == 2)) {
            raise(Errc::local_factor_indeterminate,
                  "repeated residual factor outside the shift-refinable case");
        }
        check(depth < depth_cap, Errc::local_factor_indeterminate, "refinement depth cap reached");
        FieldElement y0 = -rf[0].first.coeff(0);
        int prec = F.c[0].prec();
        Laurent theta = Laurent::monomial(y0, static_cast<int>(-a), prec);
        // F(x + theta): b'_i = sum_j C(j,i) b_j theta^(j-i)
        LocalPoly G;
        G.c.assign(static_cast<size_t>(n) + 1, Laurent::zero(K, prec));
        std::vector<Laurent> theta_pow(static_cast<size_t>(n) + 1, Laurent::one(K, prec));
        for (int k = 1; k <= n; ++k) theta_pow[static_cast<size_t>(k)] = theta_pow[static_cast<size_t>(k - 1)] * theta;
        for (int i = 0; i <= n; ++i) {
            Laurent acc = Laurent::zero(K, prec);
            for (int j = i; j <= n; ++j) {
                int64_t cb = binom_mod_p(j, i, K->p);
                if (!cb) continue;
                FieldElement cf = FieldElement::from_encoding(K, static_cast<uint64_t>(cb));
                acc = acc + F.c[static_cast<size_t>(j)] * theta_pow[static_cast<size_t>(j - i)] * cf;
            }
            G.c[static_cast<size_t>(i)] = acc;
        }
        std::vector<LocalPlaceFactor> fine = ore_places(G, depth + 1, depth_cap);
        // the refined data separates factors; the root valuation stays -slope
        for (auto& pl : fine) out.push_back({pl.e, pl.f, slope});
    }
    return out;
}

// image of t in the completion at the finite place w, as a series over the
// residue field to the requested precision
Laurent hensel_image_of_t(const Poly& prime, const FieldDescriptor* K, int prec) {
    // root of the prime in the residue field, least encoding
    Poly prime_K = map_into(prime, K);
    std::vector<FieldElement> roots = find_roots(prime_K);
    internal_check(!roots.empty(), "prime has no residue root");
    std::sort(roots.begin(), roots.end(),
              [](const FieldElement& a, const FieldElement& b) { return a.encoding() < b.encoding(); });
    Laurent T = Laurent::monomial(roots.front(), 0, prec);
    Laurent u = Laurent::monomial(FieldElement::one(K), 1, prec);
    // Newton iteration for prime(T) = u
    Poly dprime = derivative(prime_K);
    for (int it = 0; it < prec + 2; ++it) {
        // evaluate prime and its derivative at T
        Laurent val = Laurent::zero(K, prec), dval = Laurent::zero(K, prec);
        for (int i = prime_K.deg(); i >= 0; --i)
            val = val * T + Laurent::monomial(prime_K.coeff(i), 0, prec);
        for (int i = dprime.deg(); i >= 0; --i)
            dval = dval * T + Laurent::monomial(dprime.coeff(i), 0, prec);
        Laurent err = val - u;
        if (err.is_zero()) break;
        T = T - err / dval;
    }
    return T;
}

struct LocalContext {
    const FieldDescriptor* K = nullptr; // residue field
    Laurent t_image;                    // image of t
    int prec = 0;
};

LocalContext make_context(const FieldDescriptor* base, const Place& w, int prec) {
    LocalContext ctx;
    ctx.prec = prec;
    if (w.infinite) {
        ctx.K = base;
        // t = 1/z handled separately in map_local
        ctx.t_image = Laurent::zero(base, prec);
    } else {
        ctx.K = fields::get(base->p, base->n * w.prime.deg());
        ctx.t_image = hensel_image_of_t(w.prime, ctx.K, prec);
    }
    return ctx;
}

Laurent map_local(const Poly& a, const LocalContext& ctx, const Place& w) {
    if (w.infinite) return Laurent::from_poly_at_infinity(a, ctx.prec);
    Laurent acc = Laurent::zero(ctx.K, ctx.prec);
    for (int i = a.deg(); i >= 0; --i)
        acc = acc * ctx.t_image + Laurent::monomial(fields::embed(a.coeff(i), ctx.K), 0, ctx.prec);
    return acc;
}

} // namespace

std::vector<LocalPlaceFactor> local_places(const XPoly& f, const Place& w, int depth_cap) {
    const FieldDescriptor* base = f.field();
    const int64_t p = base->p;
    internal_check(f.is_monic() && f.deg() >= 1, "local places of a non-monic polynomial");

    // peel purely inseparable layers: f = g(x^(p^k))
    XPoly g = f;
    int pk = 1;
    while (g.deg() >= static_cast<int>(p)) {
        bool sparse = true;
        for (int i = 0; i <= g.deg(); ++i)
            if (!g.coeff(i).is_zero() && i % p != 0) { sparse = false; break; }
        if (!sparse) break;
        g = deflate(g, p);
        pk *= static_cast<int>(p);
    }

    for (int attempt = 0; attempt < 3; ++attempt) {
        int prec = (g.deg_t() + g.deg() + 4) * (depth_cap + 2) * (1 << attempt);
        LocalContext ctx = make_context(base, w, prec);
        LocalPoly F;
        for (int i = 0; i <= g.deg(); ++i) F.c.push_back(map_local(g.coeff(i), ctx, w));
        try {
            std::vector<LocalPlaceFactor> places = ore_places(F, 0, depth_cap);
            if (pk > 1) {
                // a purely inseparable extension of a local field with perfect
                // residue field is totally ramified
                for (auto& pl : places) {
                    pl.e *= pk;
                    pl.lambda /= pk;
                }
            }
            // consistency: sum of e*f equals the degree
            int total = 0;
            for (const auto& pl : places) total += pl.e * pl.f;
            internal_check(total == f.deg(), "local degrees do not add up");
            return places;
        } catch (const Error& e) {
            if (e.code() != Errc::precision_insufficient) throw;
        }
    }
    raise(Errc::local_factor_indeterminate, "local analysis did not stabilize at any precision");
}

Place nth_finite_place(const FieldDescriptor* fd, int k) {
    return Place::finite(nth_monic_irreducible(fd, k));
}

} // namespace anderson
