#include "anderson/linalg.hpp"

namespace anderson {

namespace {

int64_t inv_mod(int64_t a, int64_t p) {
    int64_t r = 1, b = a % p, e = p - 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

} // namespace

std::vector<int> fp_rref(FpMat& m) {
    const int64_t p = m.p;
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        int pr = -1;
        for (int i = row; i < m.rows; ++i)
            if (m.at(i, col)) { pr = i; break; }
        if (pr < 0) continue;
        if (pr != row)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(pr, j), m.at(row, j));
        int64_t inv = inv_mod(m.at(row, col), p);
        if (inv != 1)
            for (int j = col; j < m.cols; ++j)
                m.at(row, j) = static_cast<int32_t>(m.at(row, j) * inv % p);
        for (int i = 0; i < m.rows; ++i) {
            if (i == row) continue;
            int64_t c = m.at(i, col);
            if (!c) continue;
            int32_t* ri = &m.a[static_cast<size_t>(i) * m.cols];
            const int32_t* rr = &m.a[static_cast<size_t>(row) * m.cols];
            for (int j = col; j < m.cols; ++j) {
                int64_t v = (ri[j] - c * rr[j]) % p;
                if (v < 0) v += p;
                ri[j] = static_cast<int32_t>(v);
            }
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

int fp_rank(FpMat m) { return static_cast<int>(fp_rref(m).size()); }

std::vector<std::vector<int32_t>> fp_nullspace(const FpMat& m0) {
    FpMat m = m0;
    const int64_t p = m.p;
    std::vector<int> pivots = fp_rref(m);
    std::vector<bool> is_pivot(static_cast<size_t>(m.cols), false);
    for (int c : pivots) is_pivot[static_cast<size_t>(c)] = true;
    std::vector<std::vector<int32_t>> basis;
    for (int free = 0; free < m.cols; ++free) {
        if (is_pivot[static_cast<size_t>(free)]) continue;
        std::vector<int32_t> v(static_cast<size_t>(m.cols), 0);
        v[static_cast<size_t>(free)] = 1;
        for (size_t r = 0; r < pivots.size(); ++r) {
            int64_t c = m.at(static_cast<int>(r), free);
            v[static_cast<size_t>(pivots[r])] = static_cast<int32_t>(c ? p - c : 0);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<std::vector<int32_t>> fp_solve(const FpMat& m, const std::vector<int32_t>& rhs) {
    FpMat aug(m.rows, m.cols + 1, m.p);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols) = rhs[static_cast<size_t>(i)] % static_cast<int32_t>(m.p);
    }
    std::vector<int> pivots = fp_rref(aug);
    std::vector<int32_t> x(static_cast<size_t>(m.cols), 0);
    for (size_t r = 0; r < pivots.size(); ++r) {
        if (pivots[r] == m.cols) return std::nullopt;
        x[static_cast<size_t>(pivots[r])] = aug.at(static_cast<int>(r), m.cols);
    }
    return x;
}

} // namespace anderson
