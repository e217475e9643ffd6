#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include <algorithm>

#include "betaforge/detail/linalg.hpp"
#include "betaforge/errors.hpp"
#include "betaforge/jacobi.hpp"
#include "betaforge/measure.hpp"
#include "betaforge/spectral.hpp"
#include "betaforge/stieltjes.hpp"

namespace betaforge {

/// |det dF/dx| by central differences, with per-coordinate step
/// h * max(1, |x_i|).  F must map R^k -> R^k.
inline double fd_jacobian_determinant(
    const std::function<std::vector<double>(const std::vector<double>&)>& f,
    const std::vector<double>& x, double h) {
    const std::size_t k = x.size();
    std::vector<double> jac(k * k);
    std::vector<double> xp = x, xm = x;
    for (std::size_t col = 0; col < k; ++col) {
        const double step = h * std::max(1.0, std::abs(x[col]));
        xp[col] = x[col] + step;
        xm[col] = x[col] - step;
        const std::vector<double> fp = f(xp);
        const std::vector<double> fm = f(xm);
        if (fp.size() != k || fm.size() != k)
            throw LengthMismatch("fd_jacobian_determinant: F must be square");
        for (std::size_t row = 0; row < k; ++row)
            jac[row * k + col] = (fp[row] - fm[row]) / (2.0 * step);
        xp[col] = x[col];
        xm[col] = x[col];
    }
    const double det = detail::lu_determinant(jac, k);
    if (det == 0.0 || !std::isfinite(det))
        throw SingularJacobian("fd_jacobian_determinant: matrix is numerically singular");
    return std::abs(det);
}

/// Finite-difference estimate of |d(x_{1:N}, w_{1:N-1}) / d(a_{1:N}, b_{1:N-1})|
/// at the coefficients of mu, differentiating the composite map
/// (a, b) -> eigendecomposition -> (atoms, weights).  Test-scale only (N <= 6).
inline double favard_jacobian_fd(const AtomicMeasure& mu, double h) {
    const std::size_t n = mu.size();
    if (n > 6) throw ConfigError("favard_jacobian_fd: verification helper, N <= 6 only");
    if (!(h >= 1e-7 && h <= 1e-4))
        throw ConfigError("favard_jacobian_fd: step must lie in [1e-7, 1e-4]");
    const JacobiCoefficients j = stieltjes_from_atoms(mu);

    std::vector<double> coords(2 * n - 1);
    for (std::size_t i = 0; i < n; ++i) coords[i] = j.a(i);
    for (std::size_t i = 0; i + 1 < n; ++i) coords[n + i] = j.b(i);

    auto f = [n](const std::vector<double>& c) {
        std::vector<double> a(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(n));
        std::vector<double> b(c.begin() + static_cast<std::ptrdiff_t>(n), c.end());
        const SpectralSample s = eig_with_weights(JacobiCoefficients(std::move(a), std::move(b)));
        std::vector<double> out(2 * n - 1);
        for (std::size_t i = 0; i < n; ++i) out[i] = s.eigenvalues[i];
        // drop the weight of the smallest eigenvalue; it is determined by the sum
        for (std::size_t i = 1; i < n; ++i) out[n + i - 1] = (*s.weights)[i];
        return out;
    };
    return fd_jacobian_determinant(f, coords, h);
}

}  // namespace betaforge
