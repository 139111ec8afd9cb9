#ifndef ANDERSON_LINALG_HPP
#define ANDERSON_LINALG_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "anderson/error.hpp"

namespace anderson {

// Dense matrix over the prime field F_p.  The workhorse for the semilinear
// solvers, which linearize everything over the prime field.
struct FpMat {
    int rows = 0, cols = 0;
    int64_t p = 2;
    std::vector<int32_t> a;

    FpMat() = default;
    FpMat(int r, int c, int64_t p_) : rows(r), cols(c), p(p_), a(static_cast<size_t>(r) * c, 0) {}
    int32_t& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    int32_t at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

// In-place reduced row echelon form; returns pivot columns.
std::vector<int> fp_rref(FpMat& m);
int fp_rank(FpMat m);
// basis of the right nullspace, each vector length = cols
std::vector<std::vector<int32_t>> fp_nullspace(const FpMat& m);
// solve m x = rhs; nullopt when inconsistent
std::optional<std::vector<int32_t>> fp_solve(const FpMat& m, const std::vector<int32_t>& rhs);

// Generic dense Gaussian elimination over any exact field-like type with
// is_zero(), +, -, *, inv().  Used with FieldElement and RatFunc coefficients
// at small sizes.
template <class F>
struct GMat {
    int rows = 0, cols = 0;
    std::vector<F> a;
    GMat() = default;
    GMat(int r, int c, const F& zero) : rows(r), cols(c), a(static_cast<size_t>(r) * c, zero) {}
    F& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const F& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

template <class F>
std::vector<int> g_rref(GMat<F>& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        int pr = -1;
        for (int i = row; i < m.rows; ++i)
            if (!m.at(i, col).is_zero()) { pr = i; break; }
        if (pr < 0) continue;
        if (pr != row)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(pr, j), m.at(row, j));
        F inv = m.at(row, col).inv();
        for (int j = col; j < m.cols; ++j) m.at(row, j) = m.at(row, j) * inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == row || m.at(i, col).is_zero()) continue;
            F c = m.at(i, col);
            for (int j = col; j < m.cols; ++j) m.at(i, j) = m.at(i, j) - c * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class F>
int g_rank(GMat<F> m) {
    return static_cast<int>(g_rref(m).size());
}

template <class F>
std::vector<std::vector<F>> g_nullspace(GMat<F> m, const F& zero, const F& one) {
    std::vector<int> pivots = g_rref(m);
    std::vector<bool> is_pivot(static_cast<size_t>(m.cols), false);
    for (int c : pivots) is_pivot[static_cast<size_t>(c)] = true;
    std::vector<std::vector<F>> basis;
    for (int free = 0; free < m.cols; ++free) {
        if (is_pivot[static_cast<size_t>(free)]) continue;
        std::vector<F> v(static_cast<size_t>(m.cols), zero);
        v[static_cast<size_t>(free)] = one;
        for (size_t r = 0; r < pivots.size(); ++r)
            v[static_cast<size_t>(pivots[r])] = zero - m.at(static_cast<int>(r), free);
        basis.push_back(std::move(v));
    }
    return basis;
}

// solve m x = rhs; nullopt when inconsistent
template <class F>
std::optional<std::vector<F>> g_solve(const GMat<F>& m, const std::vector<F>& rhs, const F& zero) {
    GMat<F> aug(m.rows, m.cols + 1, zero);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols) = rhs[static_cast<size_t>(i)];
    }
    std::vector<int> pivots = g_rref(aug);
    std::vector<F> x(static_cast<size_t>(m.cols), zero);
    for (size_t r = 0; r < pivots.size(); ++r) {
        if (pivots[r] == m.cols) return std::nullopt; // pivot in rhs column
        x[static_cast<size_t>(pivots[r])] = aug.at(static_cast<int>(r), m.cols);
    }
    return x;
}

} // namespace anderson

#endif
