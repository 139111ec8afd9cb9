#include "anderson/polymat.hpp"

#include <algorithm>

#include "anderson/linalg.hpp"

namespace anderson {

PolyMat PolyMat::identity(const FieldDescriptor* f, int n) {
    PolyMat m(f, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Poly::one(f);
    return m;
}

PolyMat PolyMat::operator*(const PolyMat& o) const {
    internal_check(cols == o.rows, "matrix shape mismatch");
    PolyMat r(fd, rows, o.cols);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < cols; ++k) {
            const Poly& aik = at(i, k);
            if (aik.is_zero()) continue;
            for (int j = 0; j < o.cols; ++j) {
                if (o.at(k, j).is_zero()) continue;
                r.at(i, j) = r.at(i, j) + aik * o.at(k, j);
            }
        }
    return r;
}

PolyMat PolyMat::operator+(const PolyMat& o) const {
    internal_check(rows == o.rows && cols == o.cols, "matrix shape mismatch");
    PolyMat r(fd, rows, cols);
    for (size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] + o.a[i];
    return r;
}

PolyMat PolyMat::operator-(const PolyMat& o) const {
    internal_check(rows == o.rows && cols == o.cols, "matrix shape mismatch");
    PolyMat r(fd, rows, cols);
    for (size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] - o.a[i];
    return r;
}

PolyMat PolyMat::operator*(const Poly& c) const {
    PolyMat r(fd, rows, cols);
    for (size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] * c;
    return r;
}

PolyMat PolyMat::transpose() const {
    PolyMat r(fd, cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) r.at(j, i) = at(i, j);
    return r;
}

bool PolyMat::is_zero() const {
    for (const auto& v : a)
        if (!v.is_zero()) return false;
    return true;
}

int PolyMat::deg_t() const {
    int d = -1;
    for (const auto& v : a) d = std::max(d, v.deg());
    return d;
}

std::vector<Poly> PolyMat::col(int j) const {
    std::vector<Poly> v;
    v.reserve(static_cast<size_t>(rows));
    for (int i = 0; i < rows; ++i) v.push_back(at(i, j));
    return v;
}

std::vector<Poly> PolyMat::mul_vec(const std::vector<Poly>& v) const {
    internal_check(static_cast<int>(v.size()) == cols, "vector length mismatch");
    std::vector<Poly> r(static_cast<size_t>(rows), Poly::zero(fd));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if (!at(i, j).is_zero() && !v[static_cast<size_t>(j)].is_zero())
                r[static_cast<size_t>(i)] = r[static_cast<size_t>(i)] + at(i, j) * v[static_cast<size_t>(j)];
    return r;
}

PolyMat sigma_mat(const PolyMat& m, int qa) {
    PolyMat r(m.fd, m.rows, m.cols);
    for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = sigma_q(m.a[i], qa);
    return r;
}

PolyMat map_into(const PolyMat& m, const FieldDescriptor* target) {
    PolyMat r(target, m.rows, m.cols);
    for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = map_into(m.a[i], target);
    return r;
}

PolyMat from_cols(const FieldDescriptor* fd, int rows, const std::vector<std::vector<Poly>>& cols) {
    PolyMat r(fd, rows, static_cast<int>(cols.size()));
    for (int j = 0; j < r.cols; ++j)
        for (int i = 0; i < rows; ++i) r.at(i, j) = cols[static_cast<size_t>(j)][static_cast<size_t>(i)];
    return r;
}

PolyMat hstack(const PolyMat& a, const PolyMat& b) {
    internal_check(a.rows == b.rows, "hstack shape");
    PolyMat r(a.fd, a.rows, a.cols + b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int j = 0; j < a.cols; ++j) r.at(i, j) = a.at(i, j);
        for (int j = 0; j < b.cols; ++j) r.at(i, a.cols + j) = b.at(i, j);
    }
    return r;
}

PolyMat block_diag(const PolyMat& a, const PolyMat& b) {
    PolyMat r(a.fd, a.rows + b.rows, a.cols + b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) r.at(i, j) = a.at(i, j);
    for (int i = 0; i < b.rows; ++i)
        for (int j = 0; j < b.cols; ++j) r.at(a.rows + i, a.cols + j) = b.at(i, j);
    return r;
}

// Berkowitz, division free.  c holds the characteristic polynomial of the
// leading principal minor, highest degree first.
XPoly char_poly(const PolyMat& m) {
    internal_check(m.rows == m.cols, "char poly of non-square matrix");
    const FieldDescriptor* fd = m.fd;
    const int n = m.rows;
    std::vector<Poly> c = {Poly::one(fd)};
    for (int r = 1; r <= n; ++r) {
        const int mm = r - 1;
        std::vector<Poly> seq(static_cast<size_t>(r) + 1, Poly::zero(fd));
        seq[0] = Poly::one(fd);
        seq[1] = -m.at(mm, mm);
        std::vector<Poly> vec(static_cast<size_t>(mm), Poly::zero(fd));
        for (int i = 0; i < mm; ++i) vec[static_cast<size_t>(i)] = m.at(i, mm);
        for (int k = 1; k <= mm; ++k) {
            if (k >= 2) {
                std::vector<Poly> nv(static_cast<size_t>(mm), Poly::zero(fd));
                for (int i = 0; i < mm; ++i)
                    for (int j = 0; j < mm; ++j)
                        if (!m.at(i, j).is_zero() && !vec[static_cast<size_t>(j)].is_zero())
                            nv[static_cast<size_t>(i)] = nv[static_cast<size_t>(i)] + m.at(i, j) * vec[static_cast<size_t>(j)];
                vec = std::move(nv);
            }
            Poly q = Poly::zero(fd);
            for (int j = 0; j < mm; ++j)
                if (!m.at(mm, j).is_zero() && !vec[static_cast<size_t>(j)].is_zero())
                    q = q + m.at(mm, j) * vec[static_cast<size_t>(j)];
            seq[static_cast<size_t>(k) + 1] = -q;
        }
        std::vector<Poly> nc(static_cast<size_t>(r) + 1, Poly::zero(fd));
        for (int j = 0; j < r; ++j)
            for (int i = j; i <= r; ++i)
                nc[static_cast<size_t>(i)] = nc[static_cast<size_t>(i)] + seq[static_cast<size_t>(i - j)] * c[static_cast<size_t>(j)];
        c = std::move(nc);
    }
    // c[k] is the coefficient of x^(n-k)
    std::vector<Poly> coeffs(static_cast<size_t>(n) + 1, Poly::zero(fd));
    for (int k = 0; k <= n; ++k) coeffs[static_cast<size_t>(n - k)] = c[static_cast<size_t>(k)];
    return XPoly(fd, std::move(coeffs));
}

Poly det(const PolyMat& m) {
    const int n = m.rows;
    XPoly cp = char_poly(m);
    Poly d = cp.coeff(0); // (-1)^n det
    if (n % 2 == 1) d = -d;
    return d;
}

XPoly min_poly(const PolyMat& m) {
    internal_check(m.rows == m.cols, "min poly of non-square matrix");
    const FieldDescriptor* fd = m.fd;
    const int n = m.rows;
    RatFunc rzero = RatFunc::zero(fd);
    std::vector<PolyMat> powers = {PolyMat::identity(fd, n)};
    for (int k = 1; k <= n; ++k) {
        powers.push_back(powers.back() * m);
        // is m^k a combination of lower powers over K(t)?
        GMat<RatFunc> sys(n * n, k, rzero);
        std::vector<RatFunc> rhs(static_cast<size_t>(n) * n, rzero);
        for (int i = 0; i < n * n; ++i) {
            for (int j = 0; j < k; ++j) sys.at(i, j) = RatFunc(powers[static_cast<size_t>(j)].a[static_cast<size_t>(i)]);
            rhs[static_cast<size_t>(i)] = RatFunc(powers[static_cast<size_t>(k)].a[static_cast<size_t>(i)]);
        }
        auto sol = g_solve(sys, rhs, rzero);
        if (!sol) continue;
        // verify and collect: x^k - sum sol_j x^j (solution must be polynomial)
        std::vector<Poly> coeffs(static_cast<size_t>(k) + 1, Poly::zero(fd));
        coeffs[static_cast<size_t>(k)] = Poly::one(fd);
        bool poly_ok = true;
        for (int j = 0; j < k; ++j) {
            if (!(*sol)[static_cast<size_t>(j)].is_polynomial()) { poly_ok = false; break; }
            coeffs[static_cast<size_t>(j)] = -(*sol)[static_cast<size_t>(j)].num();
        }
        internal_check(poly_ok, "minimal polynomial not integral");
        // double-check annihilation
        PolyMat acc(fd, n, n);
        for (int j = k; j >= 0; --j) {
            acc = acc * m;
            for (int i = 0; i < n; ++i) acc.at(i, i) = acc.at(i, i) + coeffs[static_cast<size_t>(j)];
        }
        internal_check(acc.is_zero(), "minimal polynomial does not annihilate");
        return XPoly(fd, std::move(coeffs));
    }
    raise(Errc::internal, "no annihilator of degree <= n");
}

namespace {

struct SmithWork {
    PolyMat U, D, V;

    void swap_rows(int i, int k) {
        if (i == k) return;
        for (int j = 0; j < D.cols; ++j) std::swap(D.at(i, j), D.at(k, j));
        for (int j = 0; j < U.cols; ++j) std::swap(U.at(i, j), U.at(k, j));
    }
    void swap_cols(int j, int k) {
        if (j == k) return;
        for (int i = 0; i < D.rows; ++i) std::swap(D.at(i, j), D.at(i, k));
        for (int i = 0; i < V.rows; ++i) std::swap(V.at(i, j), V.at(i, k));
    }
    void row_sub(int i, const Poly& q, int k) { // row_i -= q * row_k
        if (q.is_zero()) return;
        for (int j = 0; j < D.cols; ++j) D.at(i, j) = D.at(i, j) - q * D.at(k, j);
        for (int j = 0; j < U.cols; ++j) U.at(i, j) = U.at(i, j) - q * U.at(k, j);
    }
    void col_sub(int j, const Poly& q, int k) { // col_j -= q * col_k
        if (q.is_zero()) return;
        for (int i = 0; i < D.rows; ++i) D.at(i, j) = D.at(i, j) - q * D.at(i, k);
        for (int i = 0; i < V.rows; ++i) V.at(i, j) = V.at(i, j) - q * V.at(i, k);
    }
    void row_scale(int i, const FieldElement& u) {
        for (int j = 0; j < D.cols; ++j) D.at(i, j) = D.at(i, j) * u;
        for (int j = 0; j < U.cols; ++j) U.at(i, j) = U.at(i, j) * u;
    }
    void row_add(int i, int k) { // row_i += row_k
        for (int j = 0; j < D.cols; ++j) D.at(i, j) = D.at(i, j) + D.at(k, j);
        for (int j = 0; j < U.cols; ++j) U.at(i, j) = U.at(i, j) + U.at(k, j);
    }
};

} // namespace

SmithResult smith_general(const PolyMat& m) {
    const FieldDescriptor* fd = m.fd;
    SmithWork w{PolyMat::identity(fd, m.rows), m, PolyMat::identity(fd, m.cols)};
    const int steps = std::min(m.rows, m.cols);
    for (int k = 0; k < steps; ++k) {
        while (true) {
            // pivot: lowest-degree nonzero entry in the trailing block,
            // ties broken by (row, col)
            int pi = -1, pj = -1, pd = 0;
            for (int i = k; i < m.rows; ++i)
                for (int j = k; j < m.cols; ++j) {
                    const Poly& e = w.D.at(i, j);
                    if (e.is_zero()) continue;
                    if (pi < 0 || e.deg() < pd) {
                        pi = i;
                        pj = j;
                        pd = e.deg();
                    }
                }
            if (pi < 0) { pi = -2; break; } // trailing block zero
            w.swap_rows(k, pi);
            w.swap_cols(k, pj);
            bool dirty = false;
            for (int i = k + 1; i < m.rows; ++i) {
                if (w.D.at(i, k).is_zero()) continue;
                Poly q = divrem(w.D.at(i, k), w.D.at(k, k)).first;
                w.row_sub(i, q, k);
                if (!w.D.at(i, k).is_zero()) dirty = true;
            }
            for (int j = k + 1; j < m.cols; ++j) {
                if (w.D.at(k, j).is_zero()) continue;
                Poly q = divrem(w.D.at(k, j), w.D.at(k, k)).first;
                w.col_sub(j, q, k);
                if (!w.D.at(k, j).is_zero()) dirty = true;
            }
            if (dirty) continue;
            // check divisibility of the trailing block by the pivot
            bool fixed = false;
            for (int i = k + 1; i < m.rows && !fixed; ++i)
                for (int j = k + 1; j < m.cols && !fixed; ++j) {
                    if (w.D.at(i, j).is_zero()) continue;
                    if (!divrem(w.D.at(i, j), w.D.at(k, k)).second.is_zero()) {
                        w.row_add(k, i);
                        fixed = true;
                    }
                }
            if (!fixed) break;
        }
        if (w.D.at(k, k).is_zero()) break;
        if (!w.D.at(k, k).is_monic()) w.row_scale(k, w.D.at(k, k).lead().inv());
    }
    return SmithResult{w.U, w.D, w.V};
}

SmithResult smith_normal_form(const PolyMat& m) {
    check(m.rows == m.cols, Errc::singular, "matrix must be square");
    check(!det(m).is_zero(), Errc::singular, "matrix is singular over the fraction field");
    SmithResult r = smith_general(m);
    for (int i = 0; i + 1 < m.rows; ++i)
        internal_check(divrem(r.D.at(i + 1, i + 1), r.D.at(i, i)).second.is_zero(),
                       "divisibility chain violated");
    return r;
}

std::vector<std::vector<Poly>> poly_kernel(const PolyMat& m) {
    SmithResult s = smith_general(m);
    std::vector<std::vector<Poly>> basis;
    for (int j = 0; j < m.cols; ++j) {
        bool zero_col = j >= std::min(m.rows, m.cols) || s.D.at(j, j).is_zero();
        if (zero_col) basis.push_back(s.V.col(j));
    }
    return basis;
}

PolyMat scaled_inverse(const PolyMat& m, const Poly& a) {
    SmithResult s = smith_normal_form(m);
    // m^{-1} = V D^{-1} U, so a m^{-1} = V diag(a / d_i) U
    PolyMat mid(m.fd, m.rows, m.rows);
    for (int i = 0; i < m.rows; ++i) mid.at(i, i) = exact_div(a, s.D.at(i, i));
    return s.V * mid * s.U;
}

namespace {

// reduce column v against the triangular set; returns residue
std::vector<Poly> reduce_against(const std::vector<std::vector<Poly>>& basis,
                                 const std::vector<int>& pivots, std::vector<Poly> v,
                                 std::vector<Poly>* coeffs_out) {
    for (size_t b = 0; b < basis.size(); ++b) {
        int pr = pivots[b];
        if (v[static_cast<size_t>(pr)].is_zero()) continue;
        Poly q = divrem(v[static_cast<size_t>(pr)], basis[b][static_cast<size_t>(pr)]).first;
        if (q.is_zero()) continue;
        for (size_t i = 0; i < v.size(); ++i) v[i] = v[i] - q * basis[b][i];
        if (coeffs_out) (*coeffs_out)[b] = (*coeffs_out)[b] + q;
    }
    return v;
}

} // namespace

PolyMat column_hermite(const PolyMat& gens) {
    const FieldDescriptor* fd = gens.fd;
    const int rows = gens.rows;
    // triangular set keyed by pivot row
    std::vector<std::vector<Poly>> basis; // sorted by pivot row
    std::vector<int> pivots;
    auto first_nonzero = [&](const std::vector<Poly>& v) {
        for (int i = 0; i < rows; ++i)
            if (!v[static_cast<size_t>(i)].is_zero()) return i;
        return -1;
    };
    std::vector<std::vector<Poly>> queue;
    for (int j = 0; j < gens.cols; ++j) queue.push_back(gens.col(j));
    while (!queue.empty()) {
        std::vector<Poly> v = std::move(queue.back());
        queue.pop_back();
        while (true) {
            int pr = first_nonzero(v);
            if (pr < 0) break;
            // find basis column with this pivot
            size_t pos = 0;
            bool found = false;
            for (; pos < pivots.size(); ++pos) {
                if (pivots[pos] == pr) { found = true; break; }
                if (pivots[pos] > pr) break;
            }
            if (!found) {
                // normalize monic and insert
                FieldElement linv = v[static_cast<size_t>(pr)].lead().inv();
                for (auto& e : v) e = e * linv;
                basis.insert(basis.begin() + static_cast<long>(pos), v);
                pivots.insert(pivots.begin() + static_cast<long>(pos), pr);
                break;
            }
            // gcd-reduce v against basis[pos] at row pr
            Poly& bp = basis[pos][static_cast<size_t>(pr)];
            if (v[static_cast<size_t>(pr)].deg() >= bp.deg()) {
                Poly q = divrem(v[static_cast<size_t>(pr)], bp).first;
                for (int i = 0; i < rows; ++i)
                    v[static_cast<size_t>(i)] = v[static_cast<size_t>(i)] - q * basis[pos][static_cast<size_t>(i)];
            } else {
                std::swap(v, basis[pos]);
                // renormalize new basis column monic
                FieldElement linv = basis[pos][static_cast<size_t>(pr)].lead().inv();
                for (auto& e : basis[pos]) e = e * linv;
            }
        }
    }
    // full reduction for canonicity: entries of earlier columns at a later
    // pivot row reduced modulo that pivot
    for (size_t c = 0; c < basis.size(); ++c)
        for (size_t b = 0; b < c; ++b) {
            int pr = pivots[c];
            Poly q = divrem(basis[b][static_cast<size_t>(pr)], basis[c][static_cast<size_t>(pr)]).first;
            if (q.is_zero()) continue;
            for (int i = 0; i < rows; ++i)
                basis[b][static_cast<size_t>(i)] = basis[b][static_cast<size_t>(i)] - q * basis[c][static_cast<size_t>(i)];
        }
    return from_cols(fd, rows, basis);
}

std::vector<int> hermite_pivots(const PolyMat& h) {
    std::vector<int> pivots;
    for (int j = 0; j < h.cols; ++j) {
        int pr = -1;
        for (int i = 0; i < h.rows; ++i)
            if (!h.at(i, j).is_zero()) { pr = i; break; }
        internal_check(pr >= 0, "zero column in triangular basis");
        pivots.push_back(pr);
    }
    return pivots;
}

std::vector<Poly> hermite_reduce(const PolyMat& h, std::vector<Poly> v) {
    std::vector<int> pivots = hermite_pivots(h);
    std::vector<std::vector<Poly>> basis;
    for (int j = 0; j < h.cols; ++j) basis.push_back(h.col(j));
    return reduce_against(basis, pivots, std::move(v), nullptr);
}

std::optional<std::vector<Poly>> hermite_solve(const PolyMat& h, const std::vector<Poly>& v) {
    std::vector<int> pivots = hermite_pivots(h);
    std::vector<std::vector<Poly>> basis;
    for (int j = 0; j < h.cols; ++j) basis.push_back(h.col(j));
    std::vector<Poly> coeffs(static_cast<size_t>(h.cols), Poly::zero(h.fd));
    std::vector<Poly> res = reduce_against(basis, pivots, v, &coeffs);
    for (const auto& e : res)
        if (!e.is_zero()) return std::nullopt;
    return coeffs;
}

std::optional<PolyMat> hermite_solve_mat(const PolyMat& h, const PolyMat& b) {
    PolyMat x(h.fd, h.cols, b.cols);
    for (int j = 0; j < b.cols; ++j) {
        auto sol = hermite_solve(h, b.col(j));
        if (!sol) return std::nullopt;
        for (int i = 0; i < h.cols; ++i) x.at(i, j) = (*sol)[static_cast<size_t>(i)];
    }
    return x;
}

uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    uint64_t r = 1;
    for (int i = 0; i < k; ++i) r = r * static_cast<uint64_t>(n - i) / static_cast<uint64_t>(i + 1);
    return r;
}

namespace {

void subsets(int n, int k, std::vector<std::vector<int>>& out) {
    std::vector<int> idx(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
    if (k == 0) {
        out.push_back({});
        return;
    }
    while (true) {
        out.push_back(idx);
        int i = k - 1;
        while (i >= 0 && idx[static_cast<size_t>(i)] == n - k + i) --i;
        if (i < 0) break;
        ++idx[static_cast<size_t>(i)];
        for (int j = i + 1; j < k; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
    }
}

Poly minor_det(const PolyMat& m, const std::vector<int>& ri, const std::vector<int>& ci) {
    const int k = static_cast<int>(ri.size());
    PolyMat sub(m.fd, k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            sub.at(i, j) = m.at(ri[static_cast<size_t>(i)], ci[static_cast<size_t>(j)]);
    return det(sub);
}

} // namespace

PolyMat exterior_power(const PolyMat& m, int i) {
    internal_check(m.rows == m.cols, "exterior power of non-square matrix");
    std::vector<std::vector<int>> ix;
    subsets(m.rows, i, ix);
    const int n = static_cast<int>(ix.size());
    PolyMat r(m.fd, n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) r.at(a, b) = minor_det(m, ix[static_cast<size_t>(a)], ix[static_cast<size_t>(b)]);
    return r;
}

} // namespace anderson
