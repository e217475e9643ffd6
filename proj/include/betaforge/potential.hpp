#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "betaforge/errors.hpp"
#include "betaforge/jacobi.hpp"

namespace betaforge {

/// Confining polynomial V(x) = g6 x^6 + g4 x^4 + g3 x^3 + g2 x^2 + g1 x.
/// There is no degree-5 member at all; the leading even coefficient must be
/// positive so the ensemble is normalizable.  When rescale_by_N is set, the
/// sampling target uses W = (beta N / 2) V.
struct PolynomialPotential {
    double g1 = 0.0;
    double g2 = 0.0;
    double g3 = 0.0;
    double g4 = 0.0;
    double g6 = 0.0;
    bool rescale_by_N = false;

    void validate() const {
        for (double g : {g1, g2, g3, g4, g6}) {
            if (!std::isfinite(g)) throw NonFinite("PolynomialPotential: non-finite coefficient");
        }
        const bool ok = g6 > 0.0 || (g6 == 0.0 && g4 > 0.0) ||
                        (g6 == 0.0 && g4 == 0.0 && g3 == 0.0 && g2 > 0.0);
        if (!ok)
            throw ConfigError(
                "PolynomialPotential: leading even coefficient must be positive "
                "(g6 > 0, or g4 > 0, or g2 > 0 with g3 = 0)");
    }

    int degree() const { return g6 != 0.0 ? 6 : (g4 != 0.0 || g3 != 0.0 ? 4 : 2); }

    double value(double x) const {
        return ((((g6 * x * x + g4) * x + g3) * x + g2) * x + g1) * x;
    }

    double deriv(double x) const {
        return (((6.0 * g6 * x * x + 4.0 * g4) * x + 3.0 * g3) * x + 2.0 * g2) * x + g1;
    }

    /// Multiplier applied to V in the chain target.
    double scale(double beta, std::size_t n) const {
        return rescale_by_N ? 0.5 * beta * static_cast<double>(n) : 1.0;
    }

    /// Whether every diagonal conditional is log-concave at every state: true
    /// for the even quartic family (the t^2 coefficient g2 + 4 g4 (b + b') is
    /// then nonnegative for any b), false as soon as a cubic or sextic term
    /// or a negative g2 can flip the curvature somewhere.
    bool log_concave_diagonals() const { return g6 == 0.0 && g3 == 0.0 && g2 >= 0.0; }
};

namespace detail {

/// Power sums tr(T^k), k = 0..6, of the tridiagonal matrix T with diagonal a
/// and squared off-diagonal b.  Works one start column at a time: with
/// u_m = T^m e_i, symmetry gives (T^{2m})_{ii} = |u_m|^2 and
/// (T^{2m+1})_{ii} = <u_m, u_{m+1}>.  A walk of length <= 6 stays within
/// distance 3 of i, so 7-wide offset buffers suffice and the cost is O(N).
inline std::array<double, 7> tridiagonal_power_traces(std::span<const double> a,
                                                      std::span<const double> b) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size());
    std::array<double, 7> tr{};
    tr[0] = static_cast<double>(n);

    // buffers indexed by offset + 3, offsets in [-3, 3]
    double u0[7], u1[7], u2[7], u3[7];
    auto matvec = [&](const double* src, double* dst, std::ptrdiff_t i) {
        for (int o = -3; o <= 3; ++o) {
            const std::ptrdiff_t row = i + o;
            if (row < 0 || row >= n) {
                dst[o + 3] = 0.0;
                continue;
            }
            double acc = a[static_cast<std::size_t>(row)] * src[o + 3];
            if (o > -3 && row > 0)
                acc += std::sqrt(b[static_cast<std::size_t>(row - 1)]) * src[o + 2];
            if (o < 3 && row + 1 < n)
                acc += std::sqrt(b[static_cast<std::size_t>(row)]) * src[o + 4];
            dst[o + 3] = acc;
        }
    };
    auto dot = [](const double* x, const double* y) {
        double s = 0.0;
        for (int k = 0; k < 7; ++k) s += x[k] * y[k];
        return s;
    };

    for (std::ptrdiff_t i = 0; i < n; ++i) {
        for (int k = 0; k < 7; ++k) u0[k] = 0.0;
        u0[3] = 1.0;
        matvec(u0, u1, i);
        matvec(u1, u2, i);
        matvec(u2, u3, i);
        tr[1] += u1[3];
        tr[2] += dot(u1, u1);
        tr[3] += dot(u1, u2);
        tr[4] += dot(u2, u2);
        tr[5] += dot(u2, u3);
        tr[6] += dot(u3, u3);
    }
    return tr;
}

}  // namespace detail

/// tr(J^k) for k = 0..6 in O(N).
inline std::array<double, 7> power_traces(const JacobiCoefficients& j) {
    return detail::tridiagonal_power_traces(j.a(), j.b());
}

/// tr V(J), assembled from the tridiagonal power sums; reference point for
/// the eigenvalue route sum_n V(lambda_n).
inline double trace_potential(const JacobiCoefficients& j, const PolynomialPotential& v) {
    const auto tr = power_traces(j);
    return v.g1 * tr[1] + v.g2 * tr[2] + v.g3 * tr[3] + v.g4 * tr[4] + v.g6 * tr[6];
}

}  // namespace betaforge
