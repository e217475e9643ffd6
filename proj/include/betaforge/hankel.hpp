#pragma once

#include <cstddef>
#include <vector>

#include "betaforge/detail/linalg.hpp"
#include "betaforge/errors.hpp"
#include "betaforge/measure.hpp"

namespace betaforge {

struct HankelDeterminants {
    double even;  // det [m_{i+j}]_{i,j=0}^{N-1}
    double odd;   // det [m_{i+j+1}]_{i,j=0}^{N-1}
    double bar;   // det [m_{i+j} - m_{i+j+1}]_{i,j=0}^{N-1}
};

/// Verification oracle: determinants of the three Hankel moment matrices of
/// order N, by pivoted dense elimination.  Hankel matrices are exponentially
/// ill-conditioned, so this is only meant for N <= 6 test-scale checks; values
/// may come out 0 or negative for invalid moment sequences and are returned
/// as-is for the caller to interpret.
inline HankelDeterminants hankel_determinants(const MomentVector& m, std::size_t n) {
    if (n == 0) throw LengthMismatch("hankel_determinants: need N >= 1");
    if (m.count() + 1 < 2 * n)
        throw LengthMismatch("hankel_determinants: need at least 2N - 1 moments");

    auto fill = [&](int shift, bool bar) {
        std::vector<double> h(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const std::size_t k = i + j + static_cast<std::size_t>(shift);
                h[i * n + j] = bar ? m.moment(k) - m.moment(k + 1) : m.moment(k);
            }
        return h;
    };

    HankelDeterminants out{};
    auto h_even = fill(0, false);
    auto h_odd = fill(1, false);
    auto h_bar = fill(0, true);
    out.even = detail::lu_determinant(h_even, n);
    out.odd = detail::lu_determinant(h_odd, n);
    out.bar = detail::lu_determinant(h_bar, n);
    return out;
}

}  // namespace betaforge
