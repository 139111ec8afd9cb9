#include "anderson/local.hpp"

#include <algorithm>
#include <numeric>

#include "anderson/factor.hpp"

namespace anderson {

namespace {

Poly power(const Poly& a, int n) {
    Poly r = Poly::one(a.field());
    for (int i = 0; i < n; ++i) r = r * a;
    return r;
}

PolyMat reduce_mat(const PolyMat& m, const Poly& modulus) {
    PolyMat r = m;
    for (auto& e : r.a) e = divrem(e, modulus).second;
    return r;
}

} // namespace

LocalShtuka localize(const Motive& m, const Place& v, int n) {
    m.validate();
    check(!v.infinite, Errc::internal, "completions at infinity use the big shtuka");
    check(n >= 1, Errc::internal, "precision must be positive");
    const FieldDescriptor* L = m.base_field();
    LocalShtuka s;
    s.place = v;
    s.precision = n;
    s.qa = m.q_exp();
    s.fold = 1;
    Poly vL = map_into(v.prime, L);
    s.modulus = power(vL, n);
    s.matrix = reduce_mat(m.tau(), s.modulus);
    s.theta = m.theta();
    Poly d = det(m.tau());
    s.etale = gcd_monic(d, vL).is_one();
    return s;
}

namespace {

struct ShtukaSpace {
    const FieldDescriptor* L;
    int r, md, dim;
    // monomial basis (j, mdeg) -> j * md + mdeg
    GMat<FieldElement> phi; // L-linear matrix of x -> matrix sigma(x)
    int q_steps;            // sigma = p-power iterated q_steps times

    explicit ShtukaSpace(const LocalShtuka& s)
        : L(s.matrix.fd), r(s.matrix.rows), md(s.modulus.deg()), dim(r * md),
          phi(r * md, r * md, FieldElement::zero(s.matrix.fd)), q_steps(s.qa * s.fold) {
        for (int j = 0; j < r; ++j)
            for (int mdeg = 0; mdeg < md; ++mdeg) {
                int col = j * md + mdeg;
                for (int i = 0; i < r; ++i) {
                    Poly img = divrem(s.matrix.at(i, j).shifted(mdeg), s.modulus).second;
                    for (int dd = 0; dd <= img.deg(); ++dd) phi.at(i * md + dd, col) = img.coeff(dd);
                }
            }
    }

    std::vector<FieldElement> apply(const std::vector<FieldElement>& x) const {
        std::vector<FieldElement> y(static_cast<size_t>(dim), FieldElement::zero(L));
        for (int i = 0; i < dim; ++i) {
            FieldElement acc = FieldElement::zero(L);
            for (int j = 0; j < dim; ++j)
                if (!phi.at(i, j).is_zero())
                    acc = acc + phi.at(i, j) * x[static_cast<size_t>(j)].pow_p_iterated(q_steps);
            y[static_cast<size_t>(i)] = acc;
        }
        return y;
    }
};

std::vector<std::vector<FieldElement>> full_basis(const FieldDescriptor* L, int dim) {
    std::vector<std::vector<FieldElement>> b;
    for (int j = 0; j < dim; ++j) {
        std::vector<FieldElement> v(static_cast<size_t>(dim), FieldElement::zero(L));
        v[static_cast<size_t>(j)] = FieldElement::one(L);
        b.push_back(std::move(v));
    }
    return b;
}

std::vector<std::vector<FieldElement>> span_reduce(std::vector<std::vector<FieldElement>> vecs,
                                                   const FieldDescriptor* L, int dim) {
    GMat<FieldElement> m(static_cast<int>(vecs.size()), dim, FieldElement::zero(L));
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

EtaleNilDecomposition etale_nil_decompose(const LocalShtuka& s) {
    check(!s.etale, Errc::not_characteristic_place,
          "decomposition is trivial away from the characteristic place");
    const FieldDescriptor* L = s.matrix.fd;
    ShtukaSpace sp(s);
    const int dim = sp.dim;

    // etale part: intersection of the images of the iterates
    std::vector<std::vector<FieldElement>> et = full_basis(L, dim);
    for (int it = 0; it <= dim; ++it) {
        std::vector<std::vector<FieldElement>> img;
        for (const auto& v : et) img.push_back(sp.apply(v));
        std::vector<std::vector<FieldElement>> red = span_reduce(img, L, dim);
        if (red.size() == et.size()) { et = std::move(red); break; }
        et = std::move(red);
    }

    // nilpotent part: union of sigma^(-k)(ker of the k-th iterate)
    std::vector<std::vector<FieldElement>> nil;
    {
        std::vector<std::vector<FieldElement>> cur; // current kernel subspace
        for (int it = 0; it < dim + 1; ++it) {
            // preimage under psi of span(cur): solve phi * y = cur-combination
            // with the twist folded into the basis afterwards
            GMat<FieldElement> sys(dim, dim + static_cast<int>(cur.size()), FieldElement::zero(L));
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) sys.at(i, j) = sp.phi.at(i, j);
            for (size_t c = 0; c < cur.size(); ++c)
                for (int i = 0; i < dim; ++i)
                    sys.at(i, dim + static_cast<int>(c)) = -cur[c][static_cast<size_t>(i)];
            auto null = g_nullspace(sys, FieldElement::zero(L), FieldElement::one(L));
            std::vector<std::vector<FieldElement>> next;
            for (const auto& v : null) {
                std::vector<FieldElement> y(v.begin(), v.begin() + dim);
                // x = sigma^{-1}(y)
                for (auto& c : y)
                    for (int k = 0; k < sp.q_steps; ++k) c = c.frobenius_inv();
                next.push_back(std::move(y));
            }
            next = span_reduce(next, L, dim);
            if (next.size() == cur.size()) { cur = std::move(next); break; }
            cur = std::move(next);
        }
        nil = cur;
    }

    EtaleNilDecomposition out;
    out.etale_dim = static_cast<int>(et.size());
    out.nil_dim = static_cast<int>(nil.size());
    internal_check(out.etale_dim + out.nil_dim == dim, "parts do not fill the space");
    out.basis_change = GMat<FieldElement>(dim, dim, FieldElement::zero(L));
    for (int j = 0; j < out.etale_dim; ++j)
        for (int i = 0; i < dim; ++i) out.basis_change.at(i, j) = et[static_cast<size_t>(j)][static_cast<size_t>(i)];
    for (int j = 0; j < out.nil_dim; ++j)
        for (int i = 0; i < dim; ++i)
            out.basis_change.at(i, out.etale_dim + j) = nil[static_cast<size_t>(j)][static_cast<size_t>(i)];

    // induced map in the split basis: B^{-1} phi B^{(q)}
    GMat<FieldElement> bq = out.basis_change;
    for (auto& c : bq.a) c = c.pow_p_iterated(sp.q_steps);
    // compute phi * bq, then solve B X = (phi bq)
    GMat<FieldElement> pb(dim, dim, FieldElement::zero(L));
    for (int i = 0; i < dim; ++i)
        for (int k = 0; k < dim; ++k) {
            if (sp.phi.at(i, k).is_zero()) continue;
            for (int j = 0; j < dim; ++j)
                if (!bq.at(k, j).is_zero()) pb.at(i, j) = pb.at(i, j) + sp.phi.at(i, k) * bq.at(k, j);
        }
    GMat<FieldElement> X(dim, dim, FieldElement::zero(L));
    for (int j = 0; j < dim; ++j) {
        std::vector<FieldElement> rhs;
        for (int i = 0; i < dim; ++i) rhs.push_back(pb.at(i, j));
        auto sol = g_solve(out.basis_change, rhs, FieldElement::zero(L));
        internal_check(sol.has_value(), "basis change not invertible");
        for (int i = 0; i < dim; ++i) X.at(i, j) = (*sol)[static_cast<size_t>(i)];
    }
    // off-diagonal blocks vanish
    for (int i = 0; i < out.etale_dim; ++i)
        for (int j = out.etale_dim; j < dim; ++j)
            internal_check(X.at(i, j).is_zero(), "parts are not invariant");
    for (int i = out.etale_dim; i < dim; ++i)
        for (int j = 0; j < out.etale_dim; ++j)
            internal_check(X.at(i, j).is_zero(), "parts are not invariant");
    out.etale_block = GMat<FieldElement>(out.etale_dim, out.etale_dim, FieldElement::zero(L));
    for (int i = 0; i < out.etale_dim; ++i)
        for (int j = 0; j < out.etale_dim; ++j) out.etale_block.at(i, j) = X.at(i, j);
    out.nil_block = GMat<FieldElement>(out.nil_dim, out.nil_dim, FieldElement::zero(L));
    for (int i = 0; i < out.nil_dim; ++i)
        for (int j = 0; j < out.nil_dim; ++j)
            out.nil_block.at(i, j) = X.at(out.etale_dim + i, out.etale_dim + j);
    return out;
}

LocalShtuka reduce_mod_a0(const LocalShtuka& s) {
    check(!s.place.infinite, Errc::no_common_subfield, "component reduction needs a finite place");
    check(s.fold == 1, Errc::no_common_subfield, "shtuka already reduced");
    const FieldDescriptor* L = s.matrix.fd;
    const int k = s.place.degree();
    const int e_over_q = L->n / s.qa; // [L : F_q]
    const int f = std::gcd(k, e_over_q);
    if (f == 1) return s; // residue field meets L in F_q only
    // the place splits over L into f conjugate factors; reduce to the least one
    Poly vL = map_into(s.place.prime, L);
    auto fac = factor_univariate(vL);
    internal_check(static_cast<int>(fac.size()) == f, "unexpected splitting over L");
    // at the characteristic place the distinguished component is the factor
    // vanishing at theta; elsewhere the least factor of the canonical order
    Poly w0 = fac[0].first;
    if (!s.etale) {
        for (auto& [h, mm] : fac)
            if (eval(h, s.theta).is_zero()) w0 = h;
    }
    Poly modulus = power(w0, s.precision);
    // f-fold composed Frobenius
    PolyMat comp = s.matrix;
    for (int i = 1; i < f; ++i) comp = comp * sigma_mat(s.matrix, s.qa * i);
    LocalShtuka out;
    out.place = s.place;
    out.precision = s.precision;
    out.qa = s.qa;
    out.fold = f;
    out.modulus = modulus;
    out.matrix = reduce_mat(comp, modulus);
    out.theta = s.theta;
    out.etale = s.etale;
    return out;
}

// ------------------------------------------------------------------
// Tate modules
// ------------------------------------------------------------------

namespace {

// F_p coordinates of an element of (L'[t]/modulus)^r
struct TateCoords {
    const FieldDescriptor* Lx;
    int r, md, nl, dim;
    TateCoords(const FieldDescriptor* L, int r_, int md_) : Lx(L), r(r_), md(md_), nl(L->n), dim(r_ * md_ * L->n) {}
    int index(int j, int mdeg, int c) const { return (j * md + mdeg) * nl + c; }
};

} // namespace

TateModuleData tate_module(const Motive& m, const Place& v, int n, int cap, int forced_ext) {
    m.validate();
    check(!(v.prime == m.epsilon()), Errc::internal, "Tate module away from the characteristic only");
    const int64_t p = m.base_field()->p;
    const int qa = m.q_exp();
    const int r = m.rank();
    const int dv = v.degree();
    const int target = qa * dv * n * r; // F_p-dimension of the fixed module

    const int first = forced_ext > 0 ? forced_ext : 1;
    const int last = forced_ext > 0 ? forced_ext : cap;
    for (int ext = first; ext <= last; ++ext) {
        const FieldDescriptor* Lx = fields::get(p, qa * m.e() * ext);
        Poly vx = map_into(v.prime, Lx);
        Poly modulus = power(vx, n);
        PolyMat T = reduce_mat(map_into(m.tau(), Lx), modulus);
        TateCoords tc(Lx, r, modulus.deg());
        // x - T sigma(x) as an F_p-linear system
        FpMat sys(tc.dim, tc.dim, p);
        std::vector<FieldElement> gp;
        {
            FieldElement g = FieldElement::gen(Lx), cur = FieldElement::one(Lx);
            for (int c = 0; c < tc.nl; ++c) {
                gp.push_back(cur);
                cur = cur * g;
            }
        }
        for (int j = 0; j < r; ++j)
            for (int mdeg = 0; mdeg < tc.md; ++mdeg)
                for (int c = 0; c < tc.nl; ++c) {
                    int col = tc.index(j, mdeg, c);
                    // x term
                    sys.at(col, col) = 1;
                    // - T sigma(x): sigma(g^c t^mdeg e_j) = (g^c)^q t^mdeg e_j
                    FieldElement gq = gp[static_cast<size_t>(c)].pow_p_iterated(qa);
                    for (int i = 0; i < r; ++i) {
                        Poly img = divrem(T.at(i, j).shifted(mdeg), modulus).second * gq;
                        for (int dd = 0; dd <= img.deg(); ++dd) {
                            const FieldElement& ce = img.coeff(dd);
                            for (int w = 0; w < tc.nl; ++w) {
                                int32_t sub = ce.coeff(w);
                                if (!sub) continue;
                                int row = tc.index(i, dd, w);
                                int64_t nv = (sys.at(row, col) - sub) % p;
                                if (nv < 0) nv += p;
                                sys.at(row, col) = static_cast<int32_t>(nv);
                            }
                        }
                    }
                }
        auto null = fp_nullspace(sys);
        if (static_cast<int>(null.size()) < target) continue;
        internal_check(static_cast<int>(null.size()) == target, "fixed module too large");

        // extract an A/v^n-basis: greedy vectors independent under the
        // F_q[t]/(v^n)-span closure
        const int ops_t = dv * n;
        FieldElement beta = fields::embed(FieldElement::gen(m.coeff_field()), Lx);
        auto to_vec = [&](const std::vector<int32_t>& w) {
            std::vector<Poly> out;
            for (int j = 0; j < r; ++j) {
                std::vector<FieldElement> cc;
                for (int mdeg = 0; mdeg < tc.md; ++mdeg) {
                    std::vector<int32_t> coords;
                    for (int c = 0; c < tc.nl; ++c) coords.push_back(w[static_cast<size_t>(tc.index(j, mdeg, c))]);
                    FieldElement acc = FieldElement::zero(Lx);
                    for (int c = 0; c < tc.nl; ++c)
                        if (coords[static_cast<size_t>(c)])
                            acc = acc + gp[static_cast<size_t>(c)] *
                                            FieldElement::from_encoding(Lx, static_cast<uint64_t>(coords[static_cast<size_t>(c)]));
                    cc.push_back(acc);
                }
                out.emplace_back(Lx, std::move(cc));
            }
            return out;
        };
        auto to_coords = [&](const std::vector<Poly>& vec) {
            std::vector<int32_t> w(static_cast<size_t>(tc.dim), 0);
            for (int j = 0; j < r; ++j)
                for (int mdeg = 0; mdeg < tc.md; ++mdeg) {
                    FieldElement ce = vec[static_cast<size_t>(j)].coeff(mdeg);
                    for (int c = 0; c < tc.nl; ++c) w[static_cast<size_t>(tc.index(j, mdeg, c))] = ce.coeff(c);
                }
            return w;
        };
        std::vector<std::vector<Poly>> basis;
        {
            // Nakayama: a family is a free basis iff it is independent modulo
            // v, so test candidates against the A-span of the accepted ones
            // plus v times the whole module
            std::vector<std::vector<int32_t>> span_rows;
            Poly vLx = map_into(v.prime, Lx);
            for (const auto& kvec : null) {
                std::vector<Poly> w = to_vec(kvec);
                for (auto& entry : w) entry = divrem(entry * vLx, modulus).second;
                span_rows.push_back(to_coords(w));
            }
            auto span_rank = [&](const std::vector<std::vector<int32_t>>& rows) {
                if (rows.empty()) return 0;
                FpMat sp(static_cast<int>(rows.size()), tc.dim, p);
                for (size_t i = 0; i < rows.size(); ++i)
                    for (int j = 0; j < tc.dim; ++j) sp.at(static_cast<int>(i), j) = rows[i][static_cast<size_t>(j)];
                return fp_rank(sp);
            };
            for (const auto& cand : null) {
                if (static_cast<int>(basis.size()) == r) break;
                int r0 = span_rank(span_rows);
                auto with = span_rows;
                with.push_back(cand);
                if (span_rank(with) == r0) continue;
                // accept; close the span under t and F_q scalar multiplication
                std::vector<Poly> vec = to_vec(cand);
                basis.push_back(vec);
                for (int s = 0; s < ops_t; ++s)
                    for (int b = 0; b < qa; ++b) {
                        std::vector<Poly> w = vec;
                        for (int ss = 0; ss < s; ++ss)
                            for (auto& entry : w) entry = divrem(entry.shifted(1), modulus).second;
                        FieldElement scal = FieldElement::one(Lx);
                        for (int bb = 0; bb < b; ++bb) scal = scal * beta;
                        for (auto& entry : w) entry = entry * scal;
                        span_rows.push_back(to_coords(w));
                    }
            }
            internal_check(static_cast<int>(basis.size()) == r, "could not extract a free basis");
            internal_check(span_rank(span_rows) == target, "basis does not generate the fixed module");
        }

        // matrices of the q^e-Frobenius and of Pi on the basis, over A/v^n
        const FieldDescriptor* Fq = m.coeff_field();
        Poly vq = power(v.prime, n);
        auto express = [&](const std::vector<std::vector<Poly>>& images) {
            // columns of the linear system: t^s beta^b basis_i
            const int unk_per = dv * n * qa;
            FpMat es(tc.dim, r * unk_per, p);
            int col = 0;
            std::vector<std::vector<std::pair<int, int>>> colinfo;
            for (int i = 0; i < r; ++i)
                for (int s = 0; s < dv * n; ++s)
                    for (int b = 0; b < qa; ++b) {
                        std::vector<Poly> w = basis[static_cast<size_t>(i)];
                        for (int ss = 0; ss < s; ++ss)
                            for (auto& entry : w) entry = divrem(entry.shifted(1), modulus).second;
                        FieldElement scal = FieldElement::one(Lx);
                        for (int bb = 0; bb < b; ++bb) scal = scal * beta;
                        for (auto& entry : w) entry = entry * scal;
                        auto coords = to_coords(w);
                        for (int row = 0; row < tc.dim; ++row) es.at(row, col) = coords[static_cast<size_t>(row)];
                        ++col;
                    }
            PolyMat out(Fq, r, r);
            for (int j = 0; j < r; ++j) {
                auto sol = fp_solve(es, to_coords(images[static_cast<size_t>(j)]));
                internal_check(sol.has_value(), "image is outside the fixed module");
                for (int i = 0; i < r; ++i) {
                    std::vector<FieldElement> cc(static_cast<size_t>(dv * n), FieldElement::zero(Fq));
                    for (int s = 0; s < dv * n; ++s)
                        for (int b = 0; b < qa; ++b) {
                            int idx = (i * dv * n + s) * qa + b;
                            int32_t cv = (*sol)[static_cast<size_t>(idx)];
                            if (!cv) continue;
                            FieldElement bq = FieldElement::gen(Fq);
                            FieldElement scal = FieldElement::one(Fq);
                            for (int bb = 0; bb < b; ++bb) scal = scal * bq;
                            cc[static_cast<size_t>(s)] = cc[static_cast<size_t>(s)] +
                                                         scal * FieldElement::from_encoding(Fq, static_cast<uint64_t>(cv));
                        }
                    out.at(i, j) = Poly(Fq, cc);
                }
            }
            return out;
        };
        std::vector<std::vector<Poly>> frob_images, pi_images;
        PolyMat PiLx = reduce_mat(map_into(m.frobenius_matrix(), Lx), modulus);
        for (const auto& b : basis) {
            std::vector<Poly> fi;
            for (const auto& entry : b) {
                std::vector<FieldElement> cc;
                for (int mdeg = 0; mdeg < tc.md; ++mdeg) cc.push_back(entry.coeff(mdeg).pow_p_iterated(qa * m.e()));
                fi.emplace_back(Lx, std::move(cc));
            }
            frob_images.push_back(std::move(fi));
            std::vector<Poly> piv(static_cast<size_t>(r), Poly::zero(Lx));
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j)
                    piv[static_cast<size_t>(i)] =
                        divrem(piv[static_cast<size_t>(i)] + PiLx.at(i, j) * b[static_cast<size_t>(j)], modulus).second;
            pi_images.push_back(std::move(piv));
        }
        TateModuleData out;
        out.place = v;
        out.precision = n;
        out.splitting_degree = ext;
        out.ext = Lx;
        out.modulus = modulus;
        out.basis = basis;
        out.frobenius = express(frob_images);
        out.pi_action = express(pi_images);
        // the arithmetic Frobenius inverts the action of Pi
        PolyMat prod = out.frobenius * out.pi_action;
        for (auto& eentry : prod.a) eentry = divrem(eentry, vq).second;
        internal_check(prod == PolyMat::identity(Fq, r), "Frobenius is not inverse to Pi");
        return out;
    }
    raise(Errc::splitting_cap_exceeded, "no splitting field found under the cap");
}

// ------------------------------------------------------------------
// the filtration at infinity
// ------------------------------------------------------------------

LatticeChain infinity_filtration(const Motive& m, int N) {
    m.validate();
    const int r = m.rank(), d = m.dim();
    if (N < 0) N = 2 * (d + r) + 4;
    check(N >= 2 * (d + r), Errc::precision_insufficient, "requested precision too small");
    Rat w = m.weight();
    LatticeChain chain;
    chain.k = static_cast<int>(w.numerator());
    chain.l = static_cast<int>(w.denominator());
    chain.precision = N;
    const int l = chain.l, k = chain.k;
    const int qa = m.q_exp();
    const FieldDescriptor* L = m.base_field();
    LaurentMat Tz = from_poly_mat_at_infinity(m.tau(), N);

    // A lattice on which z^k tau^l is an isomorphism: saturate the standard
    // lattice under the valuation-normalized iterates.  The sum stabilizes
    // because the summands stay bounded, and the stable lattice is preserved
    // exactly since det(z^k tau^l) is a unit.
    LaurentMat good = lattice_canonical(LaurentMat::identity(L, r, N));
    {
        LaurentMat tj = LaurentMat::identity(L, r, N);
        int stable = 0;
        const int cap = 2 * l * (d + r) + 8;
        for (int j = 1; j <= cap && stable < l; ++j) {
            tj = tj * sigma_mat(Tz, qa * (j - 1));
            int shift = static_cast<int>((static_cast<long long>(j) * k + l - 1) / l); // ceil(jk/l)
            LaurentMat gens(L, r, 2 * r, N);
            for (int a = 0; a < r; ++a)
                for (int b = 0; b < r; ++b) {
                    gens.at(b, a) = good.at(b, a);
                    gens.at(b, r + a) = tj.at(b, a).shift(shift);
                }
            LaurentMat next = lattice_canonical(gens);
            if (lattice_equal(next, good))
                ++stable;
            else
                stable = 0;
            good = next;
        }
        check(stable >= l, Errc::precision_insufficient, "no stable lattice found at this precision");
    }

    // iterates tau^j applied to the stable lattice
    std::vector<LaurentMat> images; // tau^j(sigma^j good)
    {
        LaurentMat tj = LaurentMat::identity(L, r, N);
        for (int j = 0; j <= 2 * l; ++j) {
            images.push_back(tj * sigma_mat(good, qa * j));
            tj = tj * sigma_mat(Tz, qa * j);
        }
    }
    for (int i = 0; i <= l; ++i) {
        LaurentMat gens(L, r, r * l, N);
        for (int j = 0; j < l; ++j)
            for (int a = 0; a < r; ++a)
                for (int b = 0; b < r; ++b) gens.at(b, j * r + a) = images[static_cast<size_t>(i + j)].at(b, a);
        chain.lattices.push_back(lattice_canonical(gens));
    }
    // periodicity Lambda_l = z^{-k} Lambda_0
    {
        LaurentMat shifted = chain.lattices[0];
        for (auto& e : shifted.a) e = e.shift(-chain.k);
        LaurentMat canon = lattice_canonical(shifted);
        check(lattice_equal(canon, chain.lattices.back()), Errc::precision_insufficient,
              "periodicity not certified at this precision");
    }
    for (int i = 0; i < chain.l; ++i) {
        // containment and cokernel dimension
        for (int j = 0; j < r; ++j) {
            std::vector<Laurent> col;
            for (int a = 0; a < r; ++a) col.push_back(chain.lattices[static_cast<size_t>(i)].at(a, j));
            check(lattice_contains(chain.lattices[static_cast<size_t>(i + 1)], col), Errc::precision_insufficient,
                  "filtration steps are not nested");
        }
        chain.coker_dims.push_back(lattice_index(chain.lattices[static_cast<size_t>(i)]) -
                                   lattice_index(chain.lattices[static_cast<size_t>(i + 1)]));
    }
    for (int dim : chain.coker_dims)
        internal_check(dim == d, "filtration step dimension differs from d");
    return chain;
}

BigShtuka big_shtuka_infinity(const Motive& m, const LatticeChain& chain) {
    const int r = m.rank(), l = chain.l, k = chain.k;
    const int qa = m.q_exp();
    const FieldDescriptor* L = m.base_field();
    const int N = chain.precision;
    LaurentMat Tz = from_poly_mat_at_infinity(m.tau(), N);

    auto solve_block = [&](const LaurentMat& basis, const LaurentMat& target) {
        LaurentMat out(L, r, r, N);
        for (int j = 0; j < r; ++j) {
            std::vector<Laurent> col;
            for (int i = 0; i < r; ++i) col.push_back(target.at(i, j));
            std::vector<Laurent> y = lattice_solve(basis, col);
            for (int i = 0; i < r; ++i) out.at(i, j) = y[static_cast<size_t>(i)];
        }
        return out;
    };

    BigShtuka out;
    out.tau = LaurentMat(L, r * l, r * l, N);
    out.pi = LaurentMat(L, r * l, r * l, N);
    auto put_block = [&](LaurentMat& big, int bi, int bj, const LaurentMat& blk) {
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) big.at(bi * r + i, bj * r + j) = blk.at(i, j);
    };
    for (int i = 0; i < l; ++i) {
        const LaurentMat& Bi = chain.lattices[static_cast<size_t>(i)];
        LaurentMat sBi = sigma_mat(Bi, qa);
        LaurentMat img = Tz * sBi; // tau(sigma* Lambda_i) in ambient coordinates
        if (i + 1 < l) {
            put_block(out.tau, i + 1, i, solve_block(chain.lattices[static_cast<size_t>(i + 1)], img));
            put_block(out.pi, i + 1, i, solve_block(chain.lattices[static_cast<size_t>(i + 1)], Bi));
        } else {
            // corner blocks through Lambda_l = z^{-k} Lambda_0
            LaurentMat imgk = img;
            for (auto& e : imgk.a) e = e.shift(k);
            put_block(out.tau, 0, l - 1, solve_block(chain.lattices[0], imgk));
            LaurentMat Bk = Bi;
            for (auto& e : Bk.a) e = e.shift(k);
            put_block(out.pi, 0, l - 1, solve_block(chain.lattices[0], Bk));
        }
    }
    // integrality of all blocks
    for (const auto& e : out.tau.a)
        internal_check(e.is_zero() || e.val() >= 0, "tau block not integral");
    for (const auto& e : out.pi.a)
        internal_check(e.is_zero() || e.val() >= 0, "pi block not integral");

    // pi^l = z^k
    {
        LaurentMat acc = LaurentMat::identity(L, r * l, N);
        for (int i = 0; i < l; ++i) acc = acc * out.pi;
        LaurentMat zk = LaurentMat::identity(L, r * l, N);
        for (auto& e : zk.a) e = e.shift(k);
        bool ok = true;
        for (size_t i = 0; i < acc.a.size(); ++i)
            if (!acc.a[i].same_series(zk.a[i])) ok = false;
        check(ok, Errc::precision_insufficient, "pi^l differs from z^k at this precision");
    }

    // Lambda(lambda) for lambda in F_{q^l} cap L
    const int sub = std::gcd(l, m.e());
    const FieldDescriptor* sf = fields::get(L->p, qa * sub);
    for (const auto& lam0 : fields::all_elements(sf)) {
        FieldElement lam = fields::embed(lam0, L);
        LaurentMat lm(L, r * l, r * l, N);
        FieldElement cur = lam;
        for (int i = 0; i < l; ++i) {
            for (int j = 0; j < r; ++j) lm.at(i * r + j, i * r + j) = Laurent::monomial(cur, 0, N);
            cur = cur.pow_p_iterated(qa);
        }
        out.lambda.emplace_back(lam, lm);
    }
    // pi Lambda(lambda^q) = Lambda(lambda) pi
    for (const auto& [lam, lm] : out.lambda) {
        FieldElement lamq = lam.pow_p_iterated(qa);
        LaurentMat lmq(L, r * l, r * l, N);
        FieldElement cur = lamq;
        for (int i = 0; i < l; ++i) {
            for (int j = 0; j < r; ++j) lmq.at(i * r + j, i * r + j) = Laurent::monomial(cur, 0, N);
            cur = cur.pow_p_iterated(qa);
        }
        LaurentMat lhs = out.pi * lmq;
        LaurentMat rhs = lm * out.pi;
        for (size_t i = 0; i < lhs.a.size(); ++i)
            internal_check(lhs.a[i].same_series(rhs.a[i]), "pi does not intertwine the scalar family");
    }
    return out;
}

} // namespace anderson
