#include "anderson/series.hpp"

#include <algorithm>
#include <sstream>

namespace anderson {

void Laurent::normalize() {
    // drop the unknown tail
    if (off_ + static_cast<int>(c_.size()) > prec_) {
        int keep = prec_ - off_;
        if (keep < 0) keep = 0;
        c_.resize(static_cast<size_t>(keep), FieldElement::zero(fd_));
    }
    size_t lead = 0;
    while (lead < c_.size() && c_[lead].is_zero()) ++lead;
    if (lead) {
        c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
        off_ += static_cast<int>(lead);
    }
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    if (c_.empty()) off_ = 0;
}

Laurent::Laurent(const FieldDescriptor* fd, int off, std::vector<FieldElement> coeffs, int prec)
    : fd_(fd), off_(off), c_(std::move(coeffs)), prec_(prec) {
    normalize();
}

Laurent Laurent::zero(const FieldDescriptor* fd, int prec) { return Laurent(fd, 0, {}, prec); }

Laurent Laurent::one(const FieldDescriptor* fd, int prec) {
    return Laurent(fd, 0, {FieldElement::one(fd)}, prec);
}

Laurent Laurent::monomial(const FieldElement& c, int exp, int prec) {
    return Laurent(c.field(), exp, {c}, prec);
}

Laurent Laurent::from_poly(const Poly& a, int prec) {
    return Laurent(a.field(), 0, a.coeffs(), prec);
}

Laurent Laurent::from_poly_at_infinity(const Poly& a, int prec) {
    if (a.is_zero()) return zero(a.field(), prec);
    std::vector<FieldElement> c(a.coeffs().rbegin(), a.coeffs().rend());
    return Laurent(a.field(), -a.deg(), std::move(c), prec);
}

FieldElement Laurent::coeff(int exp) const {
    internal_check(exp < prec_, "coefficient beyond precision");
    int i = exp - off_;
    if (i < 0 || i >= static_cast<int>(c_.size())) return FieldElement::zero(fd_);
    return c_[static_cast<size_t>(i)];
}

FieldElement Laurent::lead() const {
    internal_check(!c_.empty(), "lead of zero series");
    return c_[0];
}

Laurent Laurent::operator+(const Laurent& o) const {
    internal_check(fd_ == o.fd_, "field mismatch");
    int prec = std::min(prec_, o.prec_);
    int off = std::min(val(), o.val());
    if (off >= prec) return zero(fd_, prec);
    std::vector<FieldElement> c(static_cast<size_t>(prec - off), FieldElement::zero(fd_));
    for (int e = off; e < prec; ++e) c[static_cast<size_t>(e - off)] = coeff(e) + o.coeff(e);
    return Laurent(fd_, off, std::move(c), prec);
}

Laurent Laurent::operator-(const Laurent& o) const { return *this + (-o); }

Laurent Laurent::operator-() const {
    Laurent r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
}

Laurent Laurent::operator*(const Laurent& o) const {
    internal_check(fd_ == o.fd_, "field mismatch");
    // precision of the product: min over the two truncation sources
    int prec = std::min(prec_ + o.val(), o.prec_ + val());
    if (is_zero() || o.is_zero()) return zero(fd_, prec);
    int off = off_ + o.off_;
    if (off >= prec) return zero(fd_, prec);
    std::vector<FieldElement> c(static_cast<size_t>(prec - off), FieldElement::zero(fd_));
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        for (size_t j = 0; j < o.c_.size(); ++j) {
            int e = off_ + static_cast<int>(i) + o.off_ + static_cast<int>(j);
            if (e >= prec) break;
            c[static_cast<size_t>(e - off)] = c[static_cast<size_t>(e - off)] + c_[i] * o.c_[j];
        }
    }
    return Laurent(fd_, off, std::move(c), prec);
}

Laurent Laurent::operator*(const FieldElement& s) const {
    Laurent r = *this;
    for (auto& v : r.c_) v = v * s;
    r.normalize();
    return r;
}

Laurent Laurent::inv() const {
    check(!is_zero(), Errc::precision_insufficient, "inverting a series that vanishes to precision");
    // unit part u = sum c_i z^i with c_0 != 0; invert by recursion
    int rel = prec_ - off_; // known coefficients of the unit part
    std::vector<FieldElement> u(c_);
    u.resize(static_cast<size_t>(rel), FieldElement::zero(fd_));
    std::vector<FieldElement> w(static_cast<size_t>(rel), FieldElement::zero(fd_));
    FieldElement c0inv = u[0].inv();
    w[0] = c0inv;
    for (int k = 1; k < rel; ++k) {
        FieldElement s = FieldElement::zero(fd_);
        for (int i = 1; i <= k; ++i) s = s + u[static_cast<size_t>(i)] * w[static_cast<size_t>(k - i)];
        w[static_cast<size_t>(k)] = -(s * c0inv);
    }
    return Laurent(fd_, -off_, std::move(w), -off_ + rel);
}

Laurent Laurent::shift(int k) const {
    Laurent r = *this;
    r.off_ += k;
    r.prec_ += k;
    return r;
}

Laurent Laurent::truncated(int prec) const {
    Laurent r = *this;
    r.prec_ = std::min(prec_, prec);
    r.normalize();
    return r;
}

bool Laurent::same_series(const Laurent& o) const {
    int prec = std::min(prec_, o.prec_);
    int lo = std::min(val(), o.val());
    for (int e = lo; e < prec; ++e)
        if (coeff(e) != o.coeff(e)) return false;
    return true;
}

std::string Laurent::str(const std::string& var) const {
    if (is_zero()) return "O(" + var + "^" + std::to_string(prec_) + ")";
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        int e = off_ + static_cast<int>(i);
        os << c_[i].str();
        if (e != 0) os << "*" << var << "^" << e;
    }
    os << " + O(" << var << "^" << prec_ << ")";
    return os.str();
}

LaurentMat LaurentMat::identity(const FieldDescriptor* f, int n, int prec) {
    LaurentMat m(f, n, n, prec);
    for (int i = 0; i < n; ++i) m.at(i, i) = Laurent::one(f, prec);
    return m;
}

LaurentMat LaurentMat::operator*(const LaurentMat& o) const {
    internal_check(cols == o.rows, "shape mismatch");
    // conservative common precision
    int prec = a.empty() ? 0 : a[0].prec();
    for (const auto& v : a) prec = std::min(prec, v.prec());
    for (const auto& v : o.a) prec = std::min(prec, v.prec());
    LaurentMat r(fd, rows, o.cols, prec);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < cols; ++k) {
            if (at(i, k).is_zero()) continue;
            for (int j = 0; j < o.cols; ++j) {
                if (o.at(k, j).is_zero()) continue;
                r.at(i, j) = r.at(i, j) + at(i, k) * o.at(k, j);
            }
        }
    return r;
}

LaurentMat LaurentMat::operator-(const LaurentMat& o) const {
    internal_check(rows == o.rows && cols == o.cols, "shape mismatch");
    LaurentMat r = *this;
    for (size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] - o.a[i];
    return r;
}

LaurentMat sigma_mat(const LaurentMat& m, int qa) {
    LaurentMat r = m;
    for (auto& v : r.a) {
        // coefficientwise q-power
        Laurent w = Laurent::zero(m.fd, v.prec());
        for (int e = v.val(); e < v.prec(); ++e) {
            FieldElement c = v.coeff(e);
            if (c.is_zero()) continue;
            w = w + Laurent::monomial(c.pow_p_iterated(qa), e, v.prec());
        }
        v = w;
    }
    return r;
}

LaurentMat from_poly_mat_at_infinity(const PolyMat& m, int prec) {
    LaurentMat r(m.fd, m.rows, m.cols, prec);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r.at(i, j) = Laurent::from_poly_at_infinity(m.at(i, j), prec);
    return r;
}

LaurentMat lattice_canonical(const LaurentMat& gens) {
    const FieldDescriptor* fd = gens.fd;
    const int rows = gens.rows;
    std::vector<std::vector<Laurent>> cols;
    for (int j = 0; j < gens.cols; ++j) {
        std::vector<Laurent> c;
        for (int i = 0; i < rows; ++i) c.push_back(gens.at(i, j));
        cols.push_back(std::move(c));
    }
    for (int r = 0; r < rows; ++r) {
        // pick the column with minimal valuation at row r
        int best = -1, bv = 0;
        for (size_t j = static_cast<size_t>(r); j < cols.size(); ++j) {
            const Laurent& e = cols[j][static_cast<size_t>(r)];
            if (e.is_zero()) continue;
            if (best < 0 || e.val() < bv) {
                best = static_cast<int>(j);
                bv = e.val();
            }
        }
        check(best >= 0, Errc::precision_insufficient, "lattice rank not visible at this precision");
        std::swap(cols[static_cast<size_t>(r)], cols[static_cast<size_t>(best)]);
        // scale so the pivot is exactly z^bv
        Laurent unit = cols[static_cast<size_t>(r)][static_cast<size_t>(r)].shift(-bv);
        Laurent uinv = unit.inv();
        for (int i = 0; i < rows; ++i)
            cols[static_cast<size_t>(r)][static_cast<size_t>(i)] = cols[static_cast<size_t>(r)][static_cast<size_t>(i)] * uinv;
        for (size_t j = static_cast<size_t>(r) + 1; j < cols.size(); ++j) {
            const Laurent& e = cols[j][static_cast<size_t>(r)];
            if (e.is_zero()) continue;
            Laurent q = e.shift(-bv); // integral since val(e) >= bv
            for (int i = 0; i < rows; ++i)
                cols[j][static_cast<size_t>(i)] =
                    cols[j][static_cast<size_t>(i)] - q * cols[static_cast<size_t>(r)][static_cast<size_t>(i)];
        }
    }
    // surplus columns must now be zero to precision
    for (size_t j = static_cast<size_t>(rows); j < cols.size(); ++j)
        for (int i = 0; i < rows; ++i)
            internal_check(cols[j][static_cast<size_t>(i)].is_zero(), "dependent lattice generators do not reduce");
    // reduce entries of earlier columns at later pivot rows
    for (int r = 0; r < rows; ++r) {
        int kv = cols[static_cast<size_t>(r)][static_cast<size_t>(r)].val();
        for (int b = 0; b < r; ++b) {
            const Laurent& e = cols[static_cast<size_t>(b)][static_cast<size_t>(r)];
            if (e.is_zero() || e.val() >= e.prec()) continue;
            // subtract the part with exponent >= kv
            Laurent tail = Laurent::zero(fd, e.prec());
            for (int ex = std::max(e.val(), kv); ex < e.prec(); ++ex) {
                FieldElement c = e.coeff(ex);
                if (!c.is_zero()) tail = tail + Laurent::monomial(c, ex, e.prec());
            }
            if (tail.is_zero()) continue;
            Laurent q = tail.shift(-kv);
            for (int i = 0; i < rows; ++i)
                cols[static_cast<size_t>(b)][static_cast<size_t>(i)] =
                    cols[static_cast<size_t>(b)][static_cast<size_t>(i)] - q * cols[static_cast<size_t>(r)][static_cast<size_t>(i)];
        }
    }
    int prec = gens.a.empty() ? 0 : gens.a[0].prec();
    for (const auto& v : gens.a) prec = std::min(prec, v.prec());
    LaurentMat out(fd, rows, rows, prec);
    for (int j = 0; j < rows; ++j)
        for (int i = 0; i < rows; ++i) out.at(i, j) = cols[static_cast<size_t>(j)][static_cast<size_t>(i)];
    return out;
}

int lattice_index(const LaurentMat& canon) {
    int s = 0;
    for (int i = 0; i < canon.rows; ++i) s += canon.at(i, i).val();
    return s;
}

std::vector<Laurent> lattice_solve(const LaurentMat& canon, const std::vector<Laurent>& v) {
    const int n = canon.rows;
    std::vector<Laurent> resid = v;
    std::vector<Laurent> y(static_cast<size_t>(n), Laurent::zero(canon.fd, v.empty() ? 0 : v[0].prec()));
    for (int r = 0; r < n; ++r) {
        const Laurent& e = resid[static_cast<size_t>(r)];
        int kv = canon.at(r, r).val();
        Laurent q = e.shift(-kv);
        y[static_cast<size_t>(r)] = q;
        for (int i = 0; i < n; ++i)
            resid[static_cast<size_t>(i)] = resid[static_cast<size_t>(i)] - q * canon.at(i, r);
    }
    return y;
}

bool lattice_contains(const LaurentMat& canon, const std::vector<Laurent>& v) {
    const int n = canon.rows;
    std::vector<Laurent> resid = v;
    for (int r = 0; r < n; ++r) {
        const Laurent& e = resid[static_cast<size_t>(r)];
        if (e.is_zero()) continue;
        int kv = canon.at(r, r).val();
        if (e.val() < kv) return false;
        Laurent q = e.shift(-kv);
        for (int i = 0; i < n; ++i)
            resid[static_cast<size_t>(i)] = resid[static_cast<size_t>(i)] - q * canon.at(i, r);
    }
    for (const auto& e : resid)
        if (!e.is_zero()) return false;
    return true;
}

bool lattice_equal(const LaurentMat& a, const LaurentMat& b) {
    if (a.rows != b.rows || a.cols != b.cols) return false;
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j)
            if (!a.at(i, j).same_series(b.at(i, j))) return false;
    return true;
}

} // namespace anderson
