#ifndef ANDERSON_POLYMAT_HPP
#define ANDERSON_POLYMAT_HPP

#include <vector>

#include "anderson/poly.hpp"

namespace anderson {

// Rectangular matrix over K[t], row-major.
struct PolyMat {
    const FieldDescriptor* fd = nullptr;
    int rows = 0, cols = 0;
    std::vector<Poly> a;

    PolyMat() = default;
    PolyMat(const FieldDescriptor* f, int r, int c)
        : fd(f), rows(r), cols(c), a(static_cast<size_t>(r) * c, Poly::zero(f)) {}

    static PolyMat identity(const FieldDescriptor* f, int n);

    Poly& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Poly& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    PolyMat operator*(const PolyMat& o) const;
    PolyMat operator+(const PolyMat& o) const;
    PolyMat operator-(const PolyMat& o) const;
    PolyMat operator*(const Poly& c) const;
    bool operator==(const PolyMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
    PolyMat transpose() const;
    bool is_zero() const;
    int deg_t() const;

    std::vector<Poly> col(int j) const;
    std::vector<Poly> mul_vec(const std::vector<Poly>& v) const; // this * v
};

PolyMat sigma_mat(const PolyMat& m, int qa);     // q-power on coefficients
PolyMat map_into(const PolyMat& m, const FieldDescriptor* target);
PolyMat from_cols(const FieldDescriptor* fd, int rows, const std::vector<std::vector<Poly>>& cols);
PolyMat hstack(const PolyMat& a, const PolyMat& b);
PolyMat block_diag(const PolyMat& a, const PolyMat& b);

Poly det(const PolyMat& m);        // division free
XPoly char_poly(const PolyMat& m); // monic, det(xI - m)
XPoly min_poly(const PolyMat& m);  // monic minimal annihilator over K(t)

struct SmithResult {
    PolyMat U, D, V; // U m V = D, U and V unimodular over K[t]
};

// Rectangular elementary-divisor form; diagonal monic with divisibility chain.
// Pivoting picks the lowest-degree nonzero entry, ties by (row, col).
SmithResult smith_general(const PolyMat& m);
// Square nonsingular variant; errors with `singular` when det m = 0.
SmithResult smith_normal_form(const PolyMat& m);

// basis of { x : m x = 0 } as a free K[t]-module (saturated)
std::vector<std::vector<Poly>> poly_kernel(const PolyMat& m);

// a * m^{-1} for square nonsingular m, assuming the result is polynomial
PolyMat scaled_inverse(const PolyMat& m, const Poly& a);

// canonical triangular basis of the column span; pivot rows strictly
// increasing, pivots monic, entries right of a pivot reduced modulo it
PolyMat column_hermite(const PolyMat& gens);
// pivot row of each column of a triangular basis
std::vector<int> hermite_pivots(const PolyMat& h);
// reduce v by the triangular basis h; returns the residue
std::vector<Poly> hermite_reduce(const PolyMat& h, std::vector<Poly> v);
// solve h x = v exactly; nullopt if v is not in the column span
std::optional<std::vector<Poly>> hermite_solve(const PolyMat& h, const std::vector<Poly>& v);
// solve h X = B columnwise; nullopt if some column fails
std::optional<PolyMat> hermite_solve_mat(const PolyMat& h, const PolyMat& b);

// i-th exterior power, rows/cols indexed by ascending index subsets
PolyMat exterior_power(const PolyMat& m, int i);
uint64_t binomial(int n, int k);

} // namespace anderson

#endif
