#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "betaforge/errors.hpp"
#include "betaforge/jacobi.hpp"
#include "betaforge/measure.hpp"

namespace betaforge {

/// Recurrence coefficients of the monic orthogonal polynomials of mu, by the
/// Stieltjes procedure.  Polynomials are represented by their values on the
/// atoms in orthonormal form, so norms stay O(1) for any N; the three-term
/// recurrence alone loses orthogonality around k ~ 45, so each new vector is
/// reorthogonalized (twice) against all previous ones.  The running log of
/// ||P_k||^2 guards against breakdown on nearly-degenerate measures.
inline JacobiCoefficients stieltjes_from_atoms(const AtomicMeasure& mu) {
    const std::size_t n = mu.size();
    const std::vector<double>& x = mu.atoms();
    const std::vector<double>& w = mu.weights();

    std::vector<double> a(n), b(n > 0 ? n - 1 : 0);
    std::vector<std::vector<double>> basis;  // orthonormal polynomial values
    basis.reserve(n);
    basis.emplace_back(n, 1.0);
    std::vector<double> r(n);

    constexpr double kBreakdownLog = -64.472382603833279;  // log(1e-28)
    double log_norm2 = 0.0;

    for (std::size_t k = 0; k < n; ++k) {
        const std::vector<double>& pk = basis[k];
        double ak = 0.0;
        for (std::size_t i = 0; i < n; ++i) ak += w[i] * x[i] * pk[i] * pk[i];
        a[k] = ak;
        if (k + 1 == n) break;

        const double sq_prev = k == 0 ? 0.0 : std::sqrt(b[k - 1]);
        for (std::size_t i = 0; i < n; ++i)
            r[i] = (x[i] - ak) * pk[i] - (k == 0 ? 0.0 : sq_prev * basis[k - 1][i]);

        for (int sweep = 0; sweep < 2; ++sweep) {
            for (const std::vector<double>& pj : basis) {
                double proj = 0.0;
                for (std::size_t i = 0; i < n; ++i) proj += w[i] * r[i] * pj[i];
                for (std::size_t i = 0; i < n; ++i) r[i] -= proj * pj[i];
            }
        }

        double bk = 0.0;
        for (std::size_t i = 0; i < n; ++i) bk += w[i] * r[i] * r[i];
        if (!(bk > 0.0) || !std::isfinite(bk))
            throw NumericalBreakdown("stieltjes_from_atoms: vanishing polynomial norm");
        log_norm2 += std::log(bk);
        if (log_norm2 < kBreakdownLog)
            throw NumericalBreakdown("stieltjes_from_atoms: ||P_k||^2 below 1e-28");

        b[k] = bk;
        const double inv = 1.0 / std::sqrt(bk);
        std::vector<double> next(n);
        for (std::size_t i = 0; i < n; ++i) next[i] = r[i] * inv;
        basis.push_back(std::move(next));
    }
    return JacobiCoefficients(std::move(a), std::move(b));
}

}  // namespace betaforge
