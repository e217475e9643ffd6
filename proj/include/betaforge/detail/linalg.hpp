#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace betaforge::detail {

/// Determinant of a dense row-major n x n matrix by LU with partial pivoting.
/// Returns 0 when a pivot vanishes.  The input is clobbered.
inline double lu_determinant(std::vector<double>& m, std::size_t n) {
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::abs(m[col * n + col]);
        for (std::size_t row = col + 1; row < n; ++row) {
            const double v = std::abs(m[row * n + col]);
            if (v > best) {
                best = v;
                piv = row;
            }
        }
        if (best == 0.0) return 0.0;
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m[piv * n + j], m[col * n + j]);
            det = -det;
        }
        const double d = m[col * n + col];
        det *= d;
        for (std::size_t row = col + 1; row < n; ++row) {
            const double f = m[row * n + col] / d;
            if (f == 0.0) continue;
            for (std::size_t j = col + 1; j < n; ++j) m[row * n + j] -= f * m[col * n + j];
            m[row * n + col] = 0.0;
        }
    }
    return det;
}

}  // namespace betaforge::detail
