#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "betaforge/airy.hpp"
#include "betaforge/detail/linalg.hpp"
#include "betaforge/errors.hpp"
#include "betaforge/jacobi.hpp"
#include "betaforge/spectral.hpp"

namespace betaforge {

struct QuadratureRule {
    std::vector<double> nodes;    // in (-1, 1)
    std::vector<double> weights;  // sum to 2
};

/// Gauss-Legendre rule of order m via Golub-Welsch on the Legendre Jacobi
/// matrix: nodes are its eigenvalues, weights 2 w_n from the spectral weights.
inline QuadratureRule gauss_legendre(std::size_t m) {
    if (m == 0) throw ConfigError("gauss_legendre: order must be >= 1");
    std::vector<double> a(m, 0.0), b(m > 0 ? m - 1 : 0);
    for (std::size_t k = 1; k < m; ++k) {
        const double dk = static_cast<double>(k);
        b[k - 1] = dk * dk / ((2.0 * dk - 1.0) * (2.0 * dk + 1.0));
    }
    const SpectralSample s = eig_with_weights(JacobiCoefficients(std::move(a), std::move(b)));
    QuadratureRule rule;
    rule.nodes = s.eigenvalues;
    rule.weights = *s.weights;
    for (double& w : rule.weights) w *= 2.0;
    return rule;
}

namespace detail {

/// Airy kernel [Ai(x)Ai'(y) - Ai'(x)Ai(y)] / (x - y) with the analytic
/// diagonal limit Ai'(x)^2 - x Ai(x)^2 used when x and y nearly coincide.
inline double airy_kernel(double x, const AiryValue& fx, double y, const AiryValue& fy) {
    if (std::abs(x - y) < 1e-6 * (1.0 + std::abs(x))) {
        const double mid = 0.5 * (x + y);
        const AiryValue f = airy(mid);
        return f.ai_prime * f.ai_prime - mid * f.ai * f.ai;
    }
    return (fx.ai * fy.ai_prime - fx.ai_prime * fy.ai) / (x - y);
}

}  // namespace detail

/// Tracy-Widom beta = 2 cdf F2(s) = det(I - K_Airy) on L^2(s, inf), by
/// Fredholm-determinant quadrature: map (s, inf) to (-1, 1) through
/// x = s + L (1 + t) / (1 - t) with L = 10, build the symmetrized kernel
/// matrix at Gauss-Legendre nodes, take the determinant of I - M.
inline double tracy_widom2_cdf(double s, std::size_t quad_order = 64) {
    if (quad_order < 20) throw ConfigError("tracy_widom2_cdf: quad_order must be >= 20");
    constexpr double kMapScale = 10.0;
    const QuadratureRule rule = gauss_legendre(quad_order);

    const std::size_t m = quad_order;
    std::vector<double> x(m), root_w(m);
    std::vector<AiryValue> f(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double t = rule.nodes[i];
        x[i] = s + kMapScale * (1.0 + t) / (1.0 - t);
        const double dxdt = 2.0 * kMapScale / ((1.0 - t) * (1.0 - t));
        root_w[i] = std::sqrt(rule.weights[i] * dxdt);
        f[i] = airy(x[i]);
    }

    std::vector<double> mat(m * m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k <= i; ++k) {
            const double v = -root_w[i] * detail::airy_kernel(x[i], f[i], x[k], f[k]) * root_w[k];
            mat[i * m + k] = v;
            mat[k * m + i] = v;
        }
        mat[i * m + i] += 1.0;
    }
    const double det = detail::lu_determinant(mat, m);
    return std::min(std::max(det, 0.0), 1.0);
}

}  // namespace betaforge
