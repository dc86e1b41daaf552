#ifndef VOA_LINALG_HPP
#define VOA_LINALG_HPP

#include <optional>
#include <vector>

#include "scalar.hpp"

namespace voa {

using Vec = std::vector<Scalar>;
using Matrix = std::vector<Vec>;

/// In-place reduced row echelon form; returns the pivot columns.
inline std::vector<std::size_t> rref(Matrix& m) {
    std::vector<std::size_t> pivots;
    if (m.empty()) return pivots;
    std::size_t rows = m.size(), cols = m[0].size(), r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && is_zero(m[p][c])) ++p;
        if (p == rows) continue;
        std::swap(m[r], m[p]);
        Scalar inv = Scalar(1) / m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || is_zero(m[i][c])) continue;
            Scalar f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::size_t rank(Matrix m) { return rref(m).size(); }

/// Basis of the right kernel {x : Ax = 0}.
inline std::vector<Vec> nullspace(Matrix m, std::size_t cols) {
    if (!m.empty()) cols = m[0].size();
    auto pivots = rref(m);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<Vec> basis;
    for (std::size_t fc = 0; fc < cols; ++fc) {
        if (is_pivot[fc]) continue;
        Vec x(cols, Scalar(0));
        x[fc] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i)
            x[pivots[i]] = -m[i][fc];
        basis.push_back(std::move(x));
    }
    return basis;
}

/// One solution of Ax = b, or nullopt when inconsistent.
inline std::optional<Vec> solve(Matrix a, const Vec& b) {
    std::size_t rows = a.size();
    std::size_t cols = rows ? a[0].size() : 0;
    for (std::size_t i = 0; i < rows; ++i) a[i].push_back(b[i]);
    auto pivots = rref(a);
    if (!pivots.empty() && pivots.back() == cols) return std::nullopt; // 0 = 1 row
    Vec x(cols, Scalar(0));
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = a[i][cols];
    return x;
}

} // namespace voa

#endif
