#ifndef ANDERSON_SERIES_HPP
#define ANDERSON_SERIES_HPP

#include <vector>

#include "anderson/poly.hpp"
#include "anderson/polymat.hpp"

namespace anderson {

// Truncated Laurent series over a finite field: coefficients for exponents
// off .. prec-1 are stored (leading coefficient nonzero after normalization);
// everything at exponent >= prec is unknown.
class Laurent {
public:
    Laurent() = default;
    Laurent(const FieldDescriptor* fd, int off, std::vector<FieldElement> coeffs, int prec);

    static Laurent zero(const FieldDescriptor* fd, int prec);
    static Laurent one(const FieldDescriptor* fd, int prec);
    static Laurent monomial(const FieldElement& c, int exp, int prec);
    // polynomial in z
    static Laurent from_poly(const Poly& a, int prec);
    // polynomial in t mapped via t = 1/z
    static Laurent from_poly_at_infinity(const Poly& a, int prec);

    const FieldDescriptor* field() const { return fd_; }
    int prec() const { return prec_; }
    bool is_zero() const { return c_.empty(); } // zero to the working precision
    // valuation; prec() when the series is zero to precision
    int val() const { return c_.empty() ? prec_ : off_; }
    FieldElement coeff(int exp) const;
    FieldElement lead() const;

    Laurent operator+(const Laurent& o) const;
    Laurent operator-(const Laurent& o) const;
    Laurent operator-() const;
    Laurent operator*(const Laurent& o) const;
    Laurent operator*(const FieldElement& c) const;
    Laurent inv() const;
    Laurent operator/(const Laurent& o) const { return *this * o.inv(); }
    Laurent shift(int k) const; // * z^k
    Laurent truncated(int prec) const;

    // equality of all coefficients up to min precision
    bool same_series(const Laurent& o) const;

    std::string str(const std::string& var = "z") const;

private:
    const FieldDescriptor* fd_ = nullptr;
    int off_ = 0;
    std::vector<FieldElement> c_;
    int prec_ = 0;
    void normalize();
};

struct LaurentMat {
    const FieldDescriptor* fd = nullptr;
    int rows = 0, cols = 0;
    std::vector<Laurent> a;

    LaurentMat() = default;
    LaurentMat(const FieldDescriptor* f, int r, int c, int prec)
        : fd(f), rows(r), cols(c), a(static_cast<size_t>(r) * c, Laurent::zero(f, prec)) {}
    Laurent& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Laurent& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    LaurentMat operator*(const LaurentMat& o) const;
    LaurentMat operator-(const LaurentMat& o) const;
    static LaurentMat identity(const FieldDescriptor* f, int n, int prec);
};

LaurentMat sigma_mat(const LaurentMat& m, int qa);
LaurentMat from_poly_mat_at_infinity(const PolyMat& m, int prec);

// Canonical triangular basis of the full-rank lattice spanned by the columns:
// lower triangular, pivot (i,i) equal to z^{k_i} exactly, entries of earlier
// columns at row i reduced below valuation k_i.  Errors with
// precision_insufficient when rank cannot be certified.
LaurentMat lattice_canonical(const LaurentMat& gens);
// sum of pivot valuations of a canonical basis
int lattice_index(const LaurentMat& canon);
bool lattice_contains(const LaurentMat& canon, const std::vector<Laurent>& v);
bool lattice_equal(const LaurentMat& a, const LaurentMat& b);
// solve canonical * y = v by forward substitution
std::vector<Laurent> lattice_solve(const LaurentMat& canon, const std::vector<Laurent>& v);

} // namespace anderson

#endif
