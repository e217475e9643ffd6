#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "betaforge/errors.hpp"
#include "betaforge/jacobi.hpp"

namespace betaforge {

/// Eigenvalues of a Jacobi matrix, sorted ascending, with optional spectral
/// weights (squared first components of the normalized eigenvectors).
struct SpectralSample {
    std::vector<double> eigenvalues;
    std::optional<std::vector<double>> weights;
};

namespace detail {

/// Implicit QL with Wilkinson shifts on (d, e); when z is non-null, the first
/// row of the accumulated rotation product is carried along so that z[i]^2
/// becomes the spectral weight of d[i].  O(N^2) for eigenvalues and weights.
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e,
                           std::vector<double>* z) {
    const std::size_t n = d.size();
    if (n <= 1) return;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr int max_sweeps = 50;

    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m == l) break;
            if (iter++ == max_sweeps)
                throw ConvergenceFailure("tridiagonal_ql: eigenvalue failed to converge");

            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (std::size_t i = m; i-- > l;) {
                double f = s * e[i];
                const double bb = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * bb;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - bb;
                if (z) {
                    f = (*z)[i + 1];
                    (*z)[i + 1] = s * (*z)[i] + c * f;
                    (*z)[i] = c * (*z)[i] - s * f;
                }
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        } while (m != l);
    }
}

inline SpectralSample decompose(const JacobiCoefficients& j, bool with_weights) {
    const std::size_t n = j.size();
    std::vector<double> d = j.a();
    std::vector<double> e(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) e[i] = std::sqrt(j.b(i));

    std::vector<double> z;
    if (with_weights) {
        z.assign(n, 0.0);
        z[0] = 1.0;
    }
    tridiagonal_ql(d, e, with_weights ? &z : nullptr);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t k) { return d[i] < d[k]; });

    SpectralSample out;
    out.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = d[order[i]];
    if (with_weights) {
        std::vector<double> w(n);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = z[order[i]] * z[order[i]];
            sum += w[i];
        }
        for (double& wi : w) wi /= sum;
        out.weights = std::move(w);
    }
    return out;
}

}  // namespace detail

/// All eigenvalues of the Jacobi matrix, sorted ascending.
inline SpectralSample eigvals_tridiagonal(const JacobiCoefficients& j) {
    return detail::decompose(j, false);
}

/// Eigenvalues plus spectral weights w_n = (first eigenvector component)^2,
/// i.e. the weights of the atomic measure whose recurrence coefficients are j.
inline SpectralSample eig_with_weights(const JacobiCoefficients& j) {
    return detail::decompose(j, true);
}

}  // namespace betaforge
