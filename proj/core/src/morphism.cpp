#include "anderson/morphism.hpp"

#include <algorithm>

#include "anderson/algebra.hpp"
#include "anderson/linalg.hpp"

namespace anderson {

namespace {

bool intertwines(const Motive& src, const Motive& tgt, const PolyMat& F) {
    PolyMat lhs = F * src.tau();
    PolyMat rhs = tgt.tau() * sigma_mat(F, src.q_exp());
    return (lhs - rhs).is_zero();
}

} // namespace

Morphism::Morphism(const Motive& src, const Motive& tgt, const PolyMat& F)
    : src_(src), tgt_(tgt), F_(F) {
    check(src.q() == tgt.q() && src.e() == tgt.e() && src.theta() == tgt.theta(),
          Errc::field_mismatch, "morphism between motives over different data");
    internal_check(F.rows == tgt.rank() && F.cols == src.rank(), "morphism matrix shape");
    internal_check(intertwines(src, tgt, F), "matrix does not intertwine the semilinear maps");
}

Morphism Morphism::identity(const Motive& m) {
    return Morphism(m, m, PolyMat::identity(m.base_field(), m.rank()));
}

Morphism Morphism::scalar(const Motive& m, const Poly& a) {
    Poly aL = map_into(a, m.base_field());
    PolyMat F(m.base_field(), m.rank(), m.rank());
    for (int i = 0; i < m.rank(); ++i) F.at(i, i) = aL;
    return Morphism(m, m, F);
}

Morphism Morphism::operator+(const Morphism& o) const {
    internal_check(src_ == o.src_ && tgt_ == o.tgt_, "sum of morphisms with different ends");
    return Morphism(src_, tgt_, F_ + o.F_);
}

Morphism Morphism::operator-(const Morphism& o) const {
    internal_check(src_ == o.src_ && tgt_ == o.tgt_, "difference of morphisms with different ends");
    return Morphism(src_, tgt_, F_ - o.F_);
}

Morphism Morphism::scaled(const Poly& a) const {
    return Morphism(src_, tgt_, F_ * map_into(a, src_.base_field()));
}

Morphism compose(const Morphism& g, const Morphism& f) {
    internal_check(f.target() == g.source(), "composition mismatch");
    return Morphism(f.source(), g.target(), g.matrix() * f.matrix());
}

// ------------------------------------------------------------------
// solve_hom
// ------------------------------------------------------------------

namespace {

struct HomSystem {
    const Motive* m;
    const Motive* mp;
    const FieldDescriptor* L;
    int r, rp, nL, qa, degT;
    int64_t p;
    std::vector<FieldElement> gen_powers; // g^c for c < nL

    HomSystem(const Motive& M, const Motive& Mp) : m(&M), mp(&Mp) {
        L = M.base_field();
        r = M.rank();
        rp = Mp.rank();
        nL = L->n;
        qa = M.q_exp();
        p = L->p;
        degT = std::max(M.tau().deg_t(), Mp.tau().deg_t());
        FieldElement g = FieldElement::gen(L);
        FieldElement cur = FieldElement::one(L);
        for (int c = 0; c < nL; ++c) {
            gen_powers.push_back(cur);
            cur = cur * g;
        }
    }

    // unknown layout: ((k * rp + i) * r + j) * nL + c
    int unknowns(int B) const { return (B + 1) * rp * r * nL; }

    // rows: coefficient of t^mm of entry (i', j'), F_p coordinate w
    int equations(int B) const { return (B + degT + 1) * rp * r * nL; }

    // residual F T - T' sigma(F) for the unknown basis element g^c t^k at (i,j)
    void fill_column(int B, int k, int i, int j, int c, FpMat& sys, int col) const {
        const PolyMat& T = m->tau();
        const PolyMat& Tp = mp->tau();
        const int mrows = B + degT + 1;
        FieldElement gc = gen_powers[static_cast<size_t>(c)];
        // (F T)[i, j'] += g^c t^k T[j, j']
        for (int jp = 0; jp < r; ++jp) {
            const Poly& tj = T.at(j, jp);
            for (int dt = 0; dt <= tj.deg(); ++dt) {
                FieldElement v = tj.coeff(dt) * gc;
                if (v.is_zero()) continue;
                int mm = k + dt;
                internal_check(mm < mrows, "equation row overflow");
                int base = ((mm * rp + i) * r + jp) * nL;
                for (int w = 0; w < nL; ++w) {
                    int32_t add = v.coeff(w);
                    if (!add) continue;
                    int32_t& cell = sys.at(base + w, col);
                    cell = static_cast<int32_t>((cell + add) % p);
                }
            }
        }
        // -(T' sigma(F))[i', j] -= T'[i', i] sigma(g^c) t^k
        FieldElement gq = sigma_q(gc, qa);
        for (int ip = 0; ip < rp; ++ip) {
            const Poly& tp = Tp.at(ip, i);
            for (int dt = 0; dt <= tp.deg(); ++dt) {
                FieldElement v = tp.coeff(dt) * gq;
                if (v.is_zero()) continue;
                int mm = k + dt;
                internal_check(mm < mrows, "equation row overflow");
                int base = ((mm * rp + ip) * r + j) * nL;
                for (int w = 0; w < nL; ++w) {
                    int32_t sub = v.coeff(w);
                    if (!sub) continue;
                    int32_t& cell = sys.at(base + w, col);
                    int64_t nv = (cell - sub) % p;
                    if (nv < 0) nv += p;
                    cell = static_cast<int32_t>(nv);
                }
            }
        }
    }

    FpMat build(int B) const {
        FpMat sys(equations(B), unknowns(B), p);
        int col = 0;
        for (int k = 0; k <= B; ++k)
            for (int i = 0; i < rp; ++i)
                for (int j = 0; j < r; ++j)
                    for (int c = 0; c < nL; ++c) fill_column(B, k, i, j, c, sys, col++);
        return sys;
    }

    PolyMat to_matrix(const std::vector<int32_t>& v, int B) const {
        PolyMat F(L, rp, r);
        for (int i = 0; i < rp; ++i)
            for (int j = 0; j < r; ++j) {
                std::vector<FieldElement> coeffs;
                for (int k = 0; k <= B; ++k) {
                    FieldElement acc = FieldElement::zero(L);
                    for (int c = 0; c < nL; ++c) {
                        int idx = ((k * rp + i) * r + j) * nL + c;
                        int32_t s = v[static_cast<size_t>(idx)];
                        if (s) acc = acc + gen_powers[static_cast<size_t>(c)] *
                                            FieldElement::from_encoding(L, static_cast<uint64_t>(s));
                    }
                    coeffs.push_back(acc);
                }
                F.at(i, j) = Poly(L, std::move(coeffs));
            }
        return F;
    }
};

// top nonzero degree block of a flattened solution
int top_block(const std::vector<int32_t>& v, int block) {
    for (int k = static_cast<int>(v.size()) / block - 1; k >= 0; --k)
        for (int c = 0; c < block; ++c)
            if (v[static_cast<size_t>(k * block + c)]) return k;
    return -1;
}

} // namespace

HomBasis solve_hom(const Motive& m, const Motive& mp) {
    check(m.q() == mp.q() && m.e() == mp.e() && m.theta() == mp.theta(), Errc::field_mismatch,
          "Hom between motives over different data");
    m.validate();
    mp.validate();
    HomSystem hs(m, mp);
    const int rr = m.rank() * mp.rank();
    const int window = std::max(rr, 4);
    const int floor_exact = m.tau().deg_t() + mp.tau().deg_t() + rr;
    const int base_cap = 8 * std::max(floor_exact, 1);
    const int block = mp.rank() * m.rank() * hs.nL;

    int b_hi = floor_exact + window;
    std::optional<int> formula_dim;
    if (m.is_semisimple() && mp.is_semisimple()) {
        try {
            formula_dim = hom_dimension(m, mp);
        } catch (const Error& e) {
            // no good comparison place: fall back to the stabilization rule alone
            if (e.code() != Errc::local_factor_indeterminate) throw;
        }
    }

    while (true) {
        FpMat sys = hs.build(b_hi);
        std::vector<std::vector<int32_t>> null = fp_nullspace(sys);
        // eliminate so each vector has a distinct leading coordinate in the
        // ordering by descending degree block
        {
            const int64_t p = hs.p;
            const int ncols = hs.unknowns(b_hi);
            auto keypos = [&](int idx) { return ncols - 1 - idx; }; // descending order
            FpMat mat(static_cast<int>(null.size()), ncols, p);
            for (size_t i = 0; i < null.size(); ++i)
                for (int j = 0; j < ncols; ++j) mat.at(static_cast<int>(i), j) = null[i][static_cast<size_t>(keypos(j))];
            fp_rref(mat);
            std::vector<std::vector<int32_t>> red;
            for (int i = 0; i < mat.rows; ++i) {
                std::vector<int32_t> v(static_cast<size_t>(ncols), 0);
                bool nz = false;
                for (int j = 0; j < ncols; ++j) {
                    v[static_cast<size_t>(keypos(j))] = mat.at(i, j);
                    nz = nz || mat.at(i, j);
                }
                if (nz) red.push_back(std::move(v));
            }
            null = std::move(red);
        }
        // F_q-dimension of S_B for each B
        std::vector<int> dims(static_cast<size_t>(b_hi) + 1, 0);
        std::vector<std::pair<int, std::vector<int32_t>>> sols; // (top degree, vector)
        for (auto& v : null) {
            int tb = top_block(v, block);
            internal_check(tb >= 0, "zero nullspace vector");
            sols.emplace_back(tb, std::move(v));
            for (int B = tb; B <= b_hi; ++B) ++dims[static_cast<size_t>(B)];
        }
        for (auto& d : dims) {
            internal_check(d % hs.qa == 0, "dimension not divisible by [F_q : F_p]");
            d /= hs.qa;
        }
        std::vector<int> incr(static_cast<size_t>(b_hi) + 1, 0);
        for (int B = 0; B <= b_hi; ++B) incr[static_cast<size_t>(B)] = dims[static_cast<size_t>(B)] - (B ? dims[static_cast<size_t>(B - 1)] : 0);
        // smallest stop with stable increments over the window and B >= floor
        int b_stop = -1;
        for (int B = std::max(floor_exact, window); B <= b_hi; ++B) {
            bool stable = true;
            for (int k = 0; k < window; ++k)
                if (incr[static_cast<size_t>(B - k)] != incr[static_cast<size_t>(B)]) stable = false;
            if (stable) { b_stop = B; break; }
        }
        if (b_stop < 0) {
            if (b_hi >= base_cap + window)
                raise(Errc::degree_bound_insufficient, "Hom dimension increments did not stabilize");
            b_hi = std::min(2 * b_hi, base_cap + window);
            continue;
        }
        int rho = incr[static_cast<size_t>(b_stop)];

        // extract an A-basis from the degree-sorted solutions up to b_stop
        std::sort(sols.begin(), sols.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first < b.first;
            return a.second < b.second;
        });
        std::vector<std::pair<int, std::vector<int32_t>>> gens;
        const int ncols = hs.unknowns(b_hi);
        for (auto& [db, v] : sols) {
            if (db > b_stop) break;
            // is v in the F_p span of t-shifts of the current generators?
            std::vector<std::vector<int32_t>> shifted;
            for (auto& [dg, g] : gens)
                for (int s = 0; s + dg <= db; ++s) {
                    std::vector<int32_t> w(static_cast<size_t>(ncols), 0);
                    for (int k = 0; k + s <= b_hi; ++k)
                        for (int c = 0; c < block; ++c)
                            w[static_cast<size_t>((k + s) * block + c)] = g[static_cast<size_t>(k * block + c)];
                    shifted.push_back(std::move(w));
                }
            bool member = false;
            if (!shifted.empty()) {
                FpMat span(static_cast<int>(shifted.size()) + 1, ncols, hs.p);
                for (size_t i = 0; i < shifted.size(); ++i)
                    for (int j = 0; j < ncols; ++j) span.at(static_cast<int>(i), j) = shifted[i][static_cast<size_t>(j)];
                int rank0 = fp_rank(span);
                for (int j = 0; j < ncols; ++j) span.at(static_cast<int>(shifted.size()), j) = v[static_cast<size_t>(j)];
                member = fp_rank(span) == rank0;
            }
            if (!member) gens.emplace_back(db, v);
        }

        bool rho_ok = static_cast<int>(gens.size()) == rho;
        bool formula_ok = !formula_dim || *formula_dim == rho;
        if (rho_ok && formula_ok) {
            HomBasis hb;
            hb.rank = rho;
            hb.degree_bound = b_stop;
            hb.increments.assign(incr.begin(), incr.begin() + b_stop + 1);
            for (auto& [db, g] : gens) hb.basis.emplace_back(m, mp, hs.to_matrix(g, b_hi));
            return hb;
        }
        if (b_hi >= base_cap + window)
            raise(Errc::degree_bound_insufficient,
                  "Hom rank disagrees with the dimension formula at the degree cap");
        b_hi = std::min(2 * b_hi, base_cap + window);
    }
}

// ------------------------------------------------------------------
// isogenies
// ------------------------------------------------------------------

bool is_isogeny(const Morphism& f) {
    if (f.source().rank() != f.target().rank()) return false;
    return !det(f.matrix()).is_zero();
}

namespace {

// monic F_q[t]-polynomial below the L[t]-irreducible: product of the
// distinct sigma-orbit conjugates
Poly prime_below(const Poly& pi, const FieldDescriptor* Fq, int qa) {
    std::vector<Poly> orbit;
    Poly cur = pi;
    do {
        orbit.push_back(cur);
        cur = sigma_q(cur, qa);
    } while (!(cur == pi));
    Poly prod = Poly::one(pi.field());
    for (const auto& c : orbit) prod = prod * c;
    auto down = project_poly(prod, Fq);
    internal_check(down.has_value(), "orbit product not rational");
    return *down;
}

struct CokerData {
    std::vector<Poly> divisors; // all, monic, ascending divisibility
    std::vector<Poly> moduli;   // the nonconstant tail
    PolyMat U, Uinv, V;
    PolyMat W; // semilinear action on the nontrivial coordinates
    int dim = 0;
    std::vector<int> offset; // monomial offsets per modulus
};

CokerData cokernel_of(const Morphism& f) {
    check(is_isogeny(f), Errc::not_isogeny, "cokernel data requires an isogeny");
    const Motive& tgt = f.target();
    const FieldDescriptor* L = tgt.base_field();
    SmithResult s = smith_normal_form(f.matrix());
    CokerData cd;
    cd.U = s.U;
    cd.V = s.V;
    cd.Uinv = scaled_inverse(s.U, Poly::one(L));
    int r = f.matrix().rows;
    int first_nontrivial = r;
    for (int i = 0; i < r; ++i) {
        cd.divisors.push_back(s.D.at(i, i));
        if (s.D.at(i, i).deg() > 0 && first_nontrivial == r) first_nontrivial = i;
    }
    for (int i = first_nontrivial; i < r; ++i) cd.moduli.push_back(cd.divisors[static_cast<size_t>(i)]);
    const int k = static_cast<int>(cd.moduli.size());
    PolyMat Wfull = cd.U * tgt.tau() * sigma_mat(cd.Uinv, tgt.q_exp());
    cd.W = PolyMat(L, k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            cd.W.at(i, j) = divrem(Wfull.at(first_nontrivial + i, first_nontrivial + j),
                                   cd.moduli[static_cast<size_t>(i)]).second;
    cd.dim = 0;
    for (const auto& mo : cd.moduli) {
        cd.offset.push_back(cd.dim);
        cd.dim += mo.deg();
    }
    return cd;
}

// L-linear matrix of x -> W sigma(x) on the monomial basis of the cokernel
GMat<FieldElement> semilinear_matrix(const CokerData& cd, const FieldDescriptor* L) {
    FieldElement z = FieldElement::zero(L);
    GMat<FieldElement> phi(cd.dim, cd.dim, z);
    const int k = static_cast<int>(cd.moduli.size());
    for (int j = 0; j < k; ++j) {
        for (int mdeg = 0; mdeg < cd.moduli[static_cast<size_t>(j)].deg(); ++mdeg) {
            int col = cd.offset[static_cast<size_t>(j)] + mdeg;
            // image of t^mdeg e_j: column j of W times t^mdeg
            for (int i = 0; i < k; ++i) {
                Poly img = divrem(cd.W.at(i, j).shifted(mdeg), cd.moduli[static_cast<size_t>(i)]).second;
                for (int dd = 0; dd <= img.deg(); ++dd)
                    phi.at(cd.offset[static_cast<size_t>(i)] + dd, col) = img.coeff(dd);
            }
        }
    }
    return phi;
}

std::vector<FieldElement> apply_semilinear(const GMat<FieldElement>& phi,
                                           const std::vector<FieldElement>& x, int qa) {
    const FieldDescriptor* L = x.empty() ? nullptr : x[0].field();
    std::vector<FieldElement> y(x.size(), FieldElement::zero(L));
    for (int i = 0; i < phi.rows; ++i) {
        FieldElement acc = FieldElement::zero(L);
        for (int j = 0; j < phi.cols; ++j) {
            if (phi.at(i, j).is_zero()) continue;
            acc = acc + phi.at(i, j) * sigma_q(x[static_cast<size_t>(j)], qa);
        }
        y[static_cast<size_t>(i)] = acc;
    }
    return y;
}

// row-reduced basis of the span
std::vector<std::vector<FieldElement>> reduce_span(std::vector<std::vector<FieldElement>> vecs,
                                                   const FieldDescriptor* L, int dim) {
    FieldElement z = FieldElement::zero(L);
    GMat<FieldElement> m(static_cast<int>(vecs.size()), dim, z);
    for (size_t i = 0; i < vecs.size(); ++i)
        for (int j = 0; j < dim; ++j) m.at(static_cast<int>(i), j) = vecs[i][static_cast<size_t>(j)];
    g_rref(m);
    std::vector<std::vector<FieldElement>> out;
    for (int i = 0; i < m.rows; ++i) {
        std::vector<FieldElement> v;
        bool nz = false;
        for (int j = 0; j < dim; ++j) {
            v.push_back(m.at(i, j));
            nz = nz || !m.at(i, j).is_zero();
        }
        if (nz) out.push_back(std::move(v));
    }
    return out;
}

} // namespace

Poly isogeny_annihilator(const Morphism& f) {
    CokerData cd = cokernel_of(f);
    const FieldDescriptor* Fq = f.source().coeff_field();
    if (cd.moduli.empty()) return Poly::one(Fq);
    const Poly& last = cd.moduli.back();
    Poly a = Poly::one(Fq);
    std::vector<std::pair<Poly, int>> fac = factor_univariate(last);
    std::vector<std::pair<Poly, int>> grouped; // (prime below, max multiplicity)
    for (auto& [pi, mult] : fac) {
        Poly below = prime_below(pi, Fq, f.source().q_exp());
        bool found = false;
        for (auto& [b, mx] : grouped)
            if (b == below) {
                mx = std::max(mx, mult);
                found = true;
            }
        if (!found) grouped.emplace_back(below, mult);
    }
    for (auto& [b, mx] : grouped)
        for (int i = 0; i < mx; ++i) a = a * b;
    return a;
}

IsogenyData isogeny_data(const Morphism& f) {
    CokerData cd = cokernel_of(f);
    const Motive& src = f.source();
    const FieldDescriptor* L = src.base_field();
    const FieldDescriptor* Fq = src.coeff_field();
    IsogenyData out;
    out.elementary_divisors = cd.divisors;
    out.moduli = cd.moduli;
    out.tau_k = cd.W;
    out.coker_dim = cd.dim;
    internal_check(cd.dim == det(f.matrix()).deg(), "cokernel dimension mismatch");

    // degree ideal: group L[t]-primes by the F_q[t]-prime below
    std::vector<std::pair<Poly, int>> prime_dims; // (prime below, dim_L of the part)
    for (const auto& mo : cd.moduli) {
        for (auto& [pi, mult] : factor_univariate(mo)) {
            Poly below = prime_below(pi, Fq, src.q_exp());
            int dl = mult * pi.deg();
            bool found = false;
            for (auto& [b, dim] : prime_dims)
                if (b == below) {
                    dim += dl;
                    found = true;
                }
            if (!found) prime_dims.emplace_back(below, dl);
        }
    }
    Poly degree = Poly::one(Fq);
    Poly sep = Poly::one(Fq);
    Poly insep = Poly::one(Fq);
    for (auto& [below, dim] : prime_dims) {
        internal_check(dim % below.deg() == 0, "place contribution not divisible by its degree");
        int expo = dim / below.deg();
        Poly pw = Poly::one(Fq);
        for (int i = 0; i < expo; ++i) pw = pw * below;
        degree = degree * pw;
        if (below == src.epsilon())
            insep = insep * pw;
        else
            sep = sep * pw;
    }
    out.degree = degree;
    out.separable_part = sep;
    out.inseparable_part = insep;

    // classification from the semilinear action on the cokernel
    if (cd.dim == 0) {
        out.separable = true;
        out.purely_inseparable = false;
        return out;
    }
    GMat<FieldElement> phi = semilinear_matrix(cd, L);
    out.separable = g_rank(phi) == cd.dim;
    if (out.separable) {
        out.purely_inseparable = false;
    } else {
        // nilpotent iff the image chain reaches zero
        std::vector<std::vector<FieldElement>> span;
        for (int j = 0; j < cd.dim; ++j) {
            std::vector<FieldElement> v(static_cast<size_t>(cd.dim), FieldElement::zero(L));
            v[static_cast<size_t>(j)] = FieldElement::one(L);
            span.push_back(std::move(v));
        }
        for (int it = 0; it <= cd.dim && !span.empty(); ++it) {
            std::vector<std::vector<FieldElement>> img;
            for (const auto& v : span) img.push_back(apply_semilinear(phi, v, src.q_exp()));
            std::vector<std::vector<FieldElement>> red = reduce_span(img, L, cd.dim);
            if (red.size() == span.size() && !red.empty()) {
                // compare spans: stabilized and nonzero -> not nilpotent
                bool same = true;
                auto full = span;
                for (const auto& v : red) full.push_back(v);
                if (reduce_span(full, L, cd.dim).size() != span.size()) same = false;
                if (same) break;
            }
            span = std::move(red);
        }
        out.purely_inseparable = span.empty();
    }
    return out;
}

Poly norm_raw(const Morphism& f) {
    check(f.is_endomorphism(), Errc::internal, "norm of a non-endomorphism");
    Poly d = det(f.matrix());
    auto down = project_poly(d, f.source().coeff_field());
    check(down.has_value(), Errc::not_a_rational, "determinant not fixed by the q-power map");
    return *down;
}

Poly norm_monic(const Morphism& f) {
    Poly n = norm_raw(f);
    if (n.is_zero()) return n;
    return monic(n);
}

std::pair<Morphism, Poly> dual_isogeny(const Morphism& f) {
    check(is_isogeny(f), Errc::not_isogeny, "dual of a non-isogeny");
    Poly a(f.source().coeff_field());
    if (f.is_endomorphism() && f.source().is_semisimple())
        a = norm_monic(f);
    else
        a = isogeny_annihilator(f);
    PolyMat Fdual = scaled_inverse(f.matrix(), map_into(a, f.source().base_field()));
    Morphism dual(f.target(), f.source(), Fdual);
    // contract: f dual = a = dual f
    PolyMat prod = f.matrix() * Fdual;
    PolyMat expect = PolyMat::identity(f.source().base_field(), f.matrix().rows) *
                     map_into(a, f.source().base_field());
    internal_check((prod - expect).is_zero(), "dual contract failed");
    return {dual, a};
}

KernelImage kernel_image(const Morphism& f) {
    const Motive& src = f.source();
    const Motive& tgt = f.target();
    const FieldDescriptor* L = src.base_field();
    KernelImage out;
    if (!f.matrix().is_zero()) {
        PolyMat H = column_hermite(f.matrix());
        auto Tim = hermite_solve_mat(H, tgt.tau() * sigma_mat(H, src.q_exp()));
        internal_check(Tim.has_value(), "image is not tau-stable");
        Motive image(src.q(), src.e(), src.theta(), *Tim);
        out.image_inclusion = Morphism(image, tgt, H);
        auto P = hermite_solve_mat(H, f.matrix());
        internal_check(P.has_value(), "projection onto the image failed");
        out.projection = Morphism(src, image, *P);
        out.image = std::move(image);
    }
    std::vector<std::vector<Poly>> kb = poly_kernel(f.matrix());
    if (!kb.empty()) {
        PolyMat K = column_hermite(from_cols(L, src.rank(), kb));
        auto Tker = hermite_solve_mat(K, src.tau() * sigma_mat(K, src.q_exp()));
        internal_check(Tker.has_value(), "kernel is not tau-stable");
        Motive kernel(src.q(), src.e(), src.theta(), *Tker);
        out.kernel_inclusion = Morphism(kernel, src, K);
        out.kernel = std::move(kernel);
    }
    return out;
}

SepInsep sep_insep_factorization(const Morphism& f) {
    check(is_isogeny(f), Errc::not_isogeny, "factoring a non-isogeny");
    const Motive& src = f.source();
    const Motive& tgt = f.target();
    const FieldDescriptor* L = src.base_field();
    const int qa = src.q_exp();
    CokerData cd = cokernel_of(f);
    const int r = src.rank();

    std::vector<std::vector<FieldElement>> etale;
    if (cd.dim > 0) {
        GMat<FieldElement> phi = semilinear_matrix(cd, L);
        std::vector<std::vector<FieldElement>> span;
        for (int j = 0; j < cd.dim; ++j) {
            std::vector<FieldElement> v(static_cast<size_t>(cd.dim), FieldElement::zero(L));
            v[static_cast<size_t>(j)] = FieldElement::one(L);
            span.push_back(std::move(v));
        }
        // K_etale = intersection of the images of the iterates
        for (int it = 0; it <= cd.dim; ++it) {
            std::vector<std::vector<FieldElement>> img;
            for (const auto& v : span) img.push_back(apply_semilinear(phi, v, qa));
            std::vector<std::vector<FieldElement>> red = reduce_span(img, L, cd.dim);
            if (red.size() == span.size()) { span = std::move(red); break; }
            span = std::move(red);
        }
        etale = span;
    }

    // M'' = preimage of K_etale in the target module
    const int k = static_cast<int>(cd.moduli.size());
    const int first_nontrivial = r - k;
    std::vector<std::vector<Poly>> gens;
    for (int j = 0; j < r; ++j) gens.push_back(f.matrix().col(j));
    for (const auto& v : etale) {
        // monomial coordinates -> z-vector -> y = Uinv z
        std::vector<Poly> z(static_cast<size_t>(r), Poly::zero(L));
        for (int j = 0; j < k; ++j) {
            std::vector<FieldElement> c;
            for (int mdeg = 0; mdeg < cd.moduli[static_cast<size_t>(j)].deg(); ++mdeg)
                c.push_back(v[static_cast<size_t>(cd.offset[static_cast<size_t>(j)] + mdeg)]);
            z[static_cast<size_t>(first_nontrivial + j)] = Poly(L, std::move(c));
        }
        gens.push_back(cd.Uinv.mul_vec(z));
    }
    PolyMat H = column_hermite(from_cols(L, r, gens));
    internal_check(H.cols == r, "intermediate module not of full rank");
    auto Tmid = hermite_solve_mat(H, tgt.tau() * sigma_mat(H, qa));
    internal_check(Tmid.has_value(), "intermediate module not tau-stable");
    Motive mid(src.q(), src.e(), src.theta(), *Tmid);
    auto S = hermite_solve_mat(H, f.matrix());
    internal_check(S.has_value(), "separable factor does not divide");
    Morphism fsep(src, mid, *S);
    Morphism finsep(mid, tgt, H);
    internal_check((compose(finsep, fsep).matrix() - f.matrix()).is_zero(), "factorization mismatch");
    return SepInsep{fsep, finsep};
}

std::pair<Motive, Morphism> factor_by_quotient(const Motive& m, const QuotientData& kd) {
    const FieldDescriptor* L = m.base_field();
    const int r = m.rank();
    const int k = static_cast<int>(kd.moduli.size());
    const int qa = m.q_exp();
    internal_check(kd.rho.rows == k && kd.rho.cols == r && kd.tau_k.rows == k && kd.tau_k.cols == k,
                   "quotient data shape");
    for (const auto& mo : kd.moduli) internal_check(mo.deg() >= 1, "trivial modulus in quotient data");

    // compatibility: rho T = tau_k sigma(rho) modulo the moduli
    {
        PolyMat lhs = kd.rho * m.tau();
        PolyMat rhs = kd.tau_k * sigma_mat(kd.rho, qa);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < r; ++j) {
                Poly d = divrem(lhs.at(i, j) - rhs.at(i, j), kd.moduli[static_cast<size_t>(i)]).second;
                internal_check(d.is_zero(), "surjection does not intertwine");
            }
    }
    // surjectivity: [rho | diag(moduli)] has full column module
    {
        PolyMat diag(L, k, k);
        for (int i = 0; i < k; ++i) diag.at(i, i) = kd.moduli[static_cast<size_t>(i)];
        PolyMat H = column_hermite(hstack(kd.rho, diag));
        internal_check(H.cols == k, "quotient map has deficient rank");
        bool ident = true;
        for (int i = 0; i < k && ident; ++i)
            for (int j = 0; j < k && ident; ++j) {
                const Poly& e = H.at(i, j);
                if (i == j ? !e.is_one() : !e.is_zero()) ident = false;
            }
        internal_check(ident, "rho is not surjective onto the quotient");
    }

    // the (t - theta)-power condition on ker and coker of tau_k
    {
        int dim = 0;
        std::vector<int> offset;
        for (const auto& mo : kd.moduli) {
            offset.push_back(dim);
            dim += mo.deg();
        }
        FieldElement z = FieldElement::zero(L);
        // Phi: sigma* K -> K on monomial bases; source moduli are sigma(e_j)
        std::vector<Poly> smod;
        for (const auto& mo : kd.moduli) smod.push_back(sigma_q(mo, qa));
        GMat<FieldElement> phi(dim, dim, z);
        for (int j = 0; j < k; ++j)
            for (int mdeg = 0; mdeg < smod[static_cast<size_t>(j)].deg(); ++mdeg) {
                int col = offset[static_cast<size_t>(j)] + mdeg;
                for (int i = 0; i < k; ++i) {
                    Poly img = divrem(kd.tau_k.at(i, j).shifted(mdeg), kd.moduli[static_cast<size_t>(i)]).second;
                    for (int dd = 0; dd <= img.deg(); ++dd)
                        phi.at(offset[static_cast<size_t>(i)] + dd, col) = img.coeff(dd);
                }
            }
        auto t_action = [&](const std::vector<Poly>& mods) {
            GMat<FieldElement> tm(dim, dim, z);
            for (int j = 0; j < k; ++j)
                for (int mdeg = 0; mdeg < mods[static_cast<size_t>(j)].deg(); ++mdeg) {
                    Poly img = divrem(Poly::one(L).shifted(mdeg + 1), mods[static_cast<size_t>(j)]).second;
                    for (int dd = 0; dd <= img.deg(); ++dd)
                        tm.at(offset[static_cast<size_t>(j)] + dd, offset[static_cast<size_t>(j)] + mdeg) = img.coeff(dd);
                }
            return tm;
        };
        auto mat_mul = [&](const GMat<FieldElement>& a, const GMat<FieldElement>& b) {
            GMat<FieldElement> c(dim, dim, z);
            for (int i = 0; i < dim; ++i)
                for (int l = 0; l < dim; ++l) {
                    if (a.at(i, l).is_zero()) continue;
                    for (int j = 0; j < dim; ++j)
                        if (!b.at(l, j).is_zero()) c.at(i, j) = c.at(i, j) + a.at(i, l) * b.at(l, j);
                }
            return c;
        };
        auto shifted_power = [&](GMat<FieldElement> tm) {
            for (int i = 0; i < dim; ++i) tm.at(i, i) = tm.at(i, i) - m.theta();
            GMat<FieldElement> acc(dim, dim, z);
            for (int i = 0; i < dim; ++i) acc.at(i, i) = FieldElement::one(L);
            for (int it = 0; it < dim; ++it) acc = mat_mul(acc, tm);
            return acc;
        };
        GMat<FieldElement> nil_src = shifted_power(t_action(smod));
        GMat<FieldElement> nil_tgt = shifted_power(t_action(kd.moduli));
        // kernel of Phi must be killed by (t - theta)^dim
        auto kerb = g_nullspace(phi, z, FieldElement::one(L));
        for (const auto& v : kerb) {
            for (int i = 0; i < dim; ++i) {
                FieldElement acc = FieldElement::zero(L);
                for (int j = 0; j < dim; ++j)
                    if (!nil_src.at(i, j).is_zero()) acc = acc + nil_src.at(i, j) * v[static_cast<size_t>(j)];
                check(acc.is_zero(), Errc::bad_quotient,
                      "kernel of the induced map survives away from the characteristic");
            }
        }
        // (t - theta)^dim of the target must land in the image of Phi
        GMat<FieldElement> aug(dim, phi.cols + dim, z);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < phi.cols; ++j) aug.at(i, j) = phi.at(i, j);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) aug.at(i, phi.cols + j) = nil_tgt.at(i, j);
        int rank_phi = g_rank(phi);
        check(g_rank(aug) == rank_phi, Errc::bad_quotient,
              "cokernel of the induced map survives away from the characteristic");
    }

    // kernel of rho: x with rho x = diag(moduli) y for some y
    PolyMat diag(L, k, k);
    for (int i = 0; i < k; ++i) diag.at(i, i) = -kd.moduli[static_cast<size_t>(i)];
    PolyMat combined = hstack(kd.rho, diag);
    std::vector<std::vector<Poly>> kb = poly_kernel(combined);
    std::vector<std::vector<Poly>> xs;
    for (const auto& v : kb) xs.push_back(std::vector<Poly>(v.begin(), v.begin() + r));
    PolyMat H = column_hermite(from_cols(L, r, xs));
    internal_check(H.cols == r, "kernel of the surjection has deficient rank");
    auto Tm = hermite_solve_mat(H, m.tau() * sigma_mat(H, qa));
    internal_check(Tm.has_value(), "kernel module not tau-stable");
    Motive sub(m.q(), m.e(), m.theta(), *Tm);
    Morphism incl(sub, m, H);
    // the cokernel of the inclusion is the prescribed torsion module
    {
        SmithResult s = smith_normal_form(H);
        std::vector<Poly> got;
        for (int i = 0; i < r; ++i)
            if (s.D.at(i, i).deg() > 0) got.push_back(s.D.at(i, i));
        PolyMat dm(L, k, k);
        for (int i = 0; i < k; ++i) dm.at(i, i) = kd.moduli[static_cast<size_t>(i)];
        SmithResult sd = smith_general(dm);
        std::vector<Poly> want;
        for (int i = 0; i < k; ++i)
            if (sd.D.at(i, i).deg() > 0) want.push_back(sd.D.at(i, i));
        internal_check(got == want, "cokernel of the inclusion differs from the quotient");
    }
    return {sub, incl};
}

IdealImage ideal_image(const Motive& m, const std::vector<Morphism>& generators) {
    check(!generators.empty(), Errc::no_isogeny_in_ideal, "empty generating set");
    const FieldDescriptor* L = m.base_field();
    const FieldDescriptor* Fq = m.coeff_field();
    const int r = m.rank();
    const int qa = m.q_exp();
    for (const auto& g : generators)
        internal_check(g.source() == m && g.target() == m, "generators must be endomorphisms");

    // deterministic sweep for an isogeny in the ideal: singles, then
    // F_q-combinations, then low-degree t-combinations
    {
        bool found = false;
        for (const auto& g : generators)
            if (!det(g.matrix()).is_zero()) found = true;
        const int n = static_cast<int>(generators.size());
        for (int degc = 0; degc <= 2 && !found; ++degc) {
            uint64_t card = Fq->card_small();
            uint64_t total = 1;
            bool overflow = false;
            for (int i = 0; i < n * (degc + 1); ++i) {
                total *= card;
                if (total > 200000) { overflow = true; break; }
            }
            if (overflow) break;
            for (uint64_t code = 1; code < total && !found; ++code) {
                uint64_t c = code;
                PolyMat acc(L, r, r);
                for (int i = 0; i < n; ++i) {
                    std::vector<uint64_t> enc;
                    for (int dd = 0; dd <= degc; ++dd) {
                        enc.push_back(c % card);
                        c /= card;
                    }
                    Poly coeff = Poly::from_encodings(Fq, enc);
                    if (coeff.is_zero()) continue;
                    acc = acc + generators[static_cast<size_t>(i)].matrix() * map_into(coeff, L);
                }
                if (!det(acc).is_zero()) found = true;
            }
        }
        check(found, Errc::no_isogeny_in_ideal, "no isogeny found in the ideal");
    }

    PolyMat concat = generators[0].matrix();
    for (size_t i = 1; i < generators.size(); ++i) concat = hstack(concat, generators[i].matrix());
    PolyMat H = column_hermite(concat);
    check(H.cols == r, Errc::no_isogeny_in_ideal, "ideal image has deficient rank");
    auto Tsub = hermite_solve_mat(H, m.tau() * sigma_mat(H, qa));
    internal_check(Tsub.has_value(), "ideal image not tau-stable");
    Motive sub(m.q(), m.e(), m.theta(), *Tsub);
    Morphism incl(sub, m, H);

    // kernel-ideal test: is { f in End : im f in M^I } generated by the input?
    HomBasis endb = solve_hom(m, m);
    const int rho = endb.rank;
    const int eL = L->n / Fq->n;

    // flatten an endomorphism into F_q[t]-coordinates
    auto flatten = [&](const PolyMat& F) {
        std::vector<Poly> out;
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                const Poly& entry = F.at(i, j);
                std::vector<std::vector<FieldElement>> comp(static_cast<size_t>(eL));
                for (int dd = 0; dd <= entry.deg(); ++dd) {
                    auto co = fields::tower_coords(entry.coeff(dd), Fq);
                    for (int c = 0; c < eL; ++c) comp[static_cast<size_t>(c)].push_back(co[static_cast<size_t>(c)]);
                }
                for (int c = 0; c < eL; ++c) out.emplace_back(Fq, comp[static_cast<size_t>(c)]);
            }
        return out;
    };
    std::vector<std::vector<Poly>> gcols;
    for (const auto& g : endb.basis) gcols.push_back(flatten(g.matrix()));
    PolyMat gmat = from_cols(Fq, r * r * eL, gcols);
    PolyMat gh = column_hermite(gmat);
    internal_check(gh.cols == rho, "End basis is degenerate");

    // I as an A-submodule of A^rho in the Hermite coordinates of End
    std::vector<std::vector<Poly>> ideal_cols;
    for (const auto& gen : generators)
        for (const auto& b : endb.basis) {
            PolyMat prod = gen.matrix() * b.matrix();
            auto sol = hermite_solve(gh, flatten(prod));
            internal_check(sol.has_value(), "ideal element outside End");
            ideal_cols.push_back(*sol);
        }
    PolyMat imod = column_hermite(from_cols(Fq, rho, ideal_cols));

    // J = { f : im f inside M^I }, computed modulo the annihilator of M/M^I
    Poly ann = isogeny_annihilator(incl);
    bool flag = true;
    {
        // coordinates of t^s beta^b g_k modulo the condition "columns of the
        // matrix reduce to zero mod H"
        SmithResult sH = smith_normal_form(H);
        std::vector<Poly> dmod;
        std::vector<int> doffset;
        int ddim = 0;
        for (int i = 0; i < r; ++i) {
            doffset.push_back(ddim);
            if (sH.D.at(i, i).deg() > 0) ddim += sH.D.at(i, i).deg();
        }
        auto reduce_cols = [&](const PolyMat& F) {
            // z = U_H y mod d_i for every column, flattened to F_p coords
            std::vector<int32_t> out;
            PolyMat z = sH.U * F;
            for (int j = 0; j < r; ++j)
                for (int i = 0; i < r; ++i) {
                    if (sH.D.at(i, i).deg() == 0) continue;
                    Poly rem = divrem(z.at(i, j), sH.D.at(i, i)).second;
                    for (int dd = 0; dd < sH.D.at(i, i).deg(); ++dd) {
                        FieldElement ce = rem.coeff(dd);
                        for (int w = 0; w < L->n; ++w) out.push_back(ce.coeff(w));
                    }
                }
            return out;
        };
        const int wdim = static_cast<int>(reduce_cols(endb.basis[0].matrix()).size());
        if (wdim == 0) {
            // M^I = M; J = End, so the flag asks whether I is everything
            std::vector<Poly> unit(static_cast<size_t>(rho), Poly::zero(Fq));
            for (int kk = 0; kk < rho && flag; ++kk) {
                std::fill(unit.begin(), unit.end(), Poly::zero(Fq));
                unit[static_cast<size_t>(kk)] = Poly::one(Fq);
                std::vector<Poly> res = hermite_reduce(imod, unit);
                for (const auto& e : res)
                    if (!e.is_zero()) flag = false;
            }
        } else {
            const int mdeg = ann.deg();
            // unknowns: coefficients of a_k mod ann over F_q
            const int nunk = rho * mdeg * static_cast<int>(Fq->n);
            FpMat sys(wdim, nunk, L->p);
            int col = 0;
            for (int kk = 0; kk < rho; ++kk)
                for (int s = 0; s < mdeg; ++s)
                    for (int b = 0; b < Fq->n; ++b) {
                        // t^s * beta^b * g_k with beta the F_q generator lift
                        Poly ts = Poly::one(Fq).shifted(s);
                        FieldElement beta = FieldElement::gen(Fq);
                        FieldElement scal = FieldElement::one(Fq);
                        for (int bb = 0; bb < b; ++bb) scal = scal * beta;
                        Poly coeff = ts * scal;
                        PolyMat F = endb.basis[static_cast<size_t>(kk)].matrix() * map_into(coeff, L);
                        std::vector<int32_t> w = reduce_cols(F);
                        for (int i = 0; i < wdim; ++i) sys.at(i, col) = w[static_cast<size_t>(i)];
                        ++col;
                    }
            auto null = fp_nullspace(sys);
            // each nullspace vector gives a member of J; check membership in I
            for (const auto& v : null) {
                std::vector<Poly> coords(static_cast<size_t>(rho), Poly::zero(Fq));
                int idx = 0;
                for (int kk = 0; kk < rho; ++kk) {
                    std::vector<FieldElement> cc(static_cast<size_t>(mdeg), FieldElement::zero(Fq));
                    for (int s = 0; s < mdeg; ++s)
                        for (int b = 0; b < Fq->n; ++b) {
                            int32_t cv = v[static_cast<size_t>(idx++)];
                            if (!cv) continue;
                            FieldElement beta = FieldElement::gen(Fq);
                            FieldElement scal = FieldElement::one(Fq);
                            for (int bb = 0; bb < b; ++bb) scal = scal * beta;
                            cc[static_cast<size_t>(s)] =
                                cc[static_cast<size_t>(s)] +
                                scal * FieldElement::from_encoding(Fq, static_cast<uint64_t>(cv));
                        }
                    coords[static_cast<size_t>(kk)] = Poly(Fq, cc);
                }
                std::vector<Poly> res = hermite_reduce(imod, coords);
                for (const auto& e : res)
                    if (!e.is_zero()) flag = false;
                if (!flag) break;
            }
            // multiples of the annihilator are always in J; they must be in I
            if (flag) {
                for (int kk = 0; kk < rho && flag; ++kk) {
                    std::vector<Poly> coords(static_cast<size_t>(rho), Poly::zero(Fq));
                    coords[static_cast<size_t>(kk)] = ann;
                    std::vector<Poly> res = hermite_reduce(imod, coords);
                    for (const auto& e : res)
                        if (!e.is_zero()) flag = false;
                }
            }
        }
    }
    return IdealImage{std::move(sub), std::move(incl), flag};
}

} // namespace anderson
