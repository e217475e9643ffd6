#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "betaforge/errors.hpp"

namespace betaforge {

namespace detail {

inline void require_finite(const std::vector<double>& v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) throw NonFinite(std::string(what) + ": non-finite entry");
    }
}

}  // namespace detail

/// Entries of the symmetric tridiagonal matrix with diagonal a_1..a_N and
/// off-diagonal sqrt(b_1)..sqrt(b_{N-1}).  Only the squared off-diagonal
/// entries b_n are stored; they must be strictly positive.
class JacobiCoefficients {
public:
    JacobiCoefficients(std::vector<double> diag, std::vector<double> offdiag_sq)
        : a_(std::move(diag)), b_(std::move(offdiag_sq)) {
        if (a_.empty()) throw LengthMismatch("JacobiCoefficients: need N >= 1");
        if (b_.size() + 1 != a_.size())
            throw LengthMismatch("JacobiCoefficients: length(b) must be length(a) - 1");
        detail::require_finite(a_, "JacobiCoefficients a");
        detail::require_finite(b_, "JacobiCoefficients b");
        for (double bn : b_) {
            if (!(bn > 0.0))
                throw NonPositiveOffDiagonal("JacobiCoefficients: all b_n must be > 0");
        }
    }

    std::size_t size() const { return a_.size(); }
    const std::vector<double>& a() const { return a_; }
    const std::vector<double>& b() const { return b_; }

    double& a(std::size_t i) { return a_[i]; }
    double& b(std::size_t i) { return b_[i]; }
    double a(std::size_t i) const { return a_[i]; }
    double b(std::size_t i) const { return b_[i]; }

private:
    std::vector<double> a_;
    std::vector<double> b_;
};

inline JacobiCoefficients build_jacobi(std::vector<double> a, std::vector<double> b) {
    return JacobiCoefficients(std::move(a), std::move(b));
}

/// Entries of the bidiagonal Cholesky factor of a positive-definite Jacobi
/// matrix, xi_1..xi_{2N-1}, all positive.
struct XiParams {
    explicit XiParams(std::vector<double> values) : xi(std::move(values)) {
        if (xi.empty() || xi.size() % 2 == 0)
            throw LengthMismatch("XiParams: length must be odd (2N - 1)");
        detail::require_finite(xi, "XiParams");
        for (double x : xi) {
            if (!(x > 0.0)) throw NotPositiveDefinite("XiParams: all xi_k must be > 0");
        }
    }

    std::size_t order() const { return (xi.size() + 1) / 2; }  // N

    std::vector<double> xi;
};

/// Canonical moments c_1..c_{2N-1} of a measure supported in (0, 1), each in
/// the open unit interval.
struct CanonicalMoments {
    explicit CanonicalMoments(std::vector<double> values) : c(std::move(values)) {
        if (c.empty() || c.size() % 2 == 0)
            throw LengthMismatch("CanonicalMoments: length must be odd (2N - 1)");
        detail::require_finite(c, "CanonicalMoments");
        for (double x : c) {
            if (!(x > 0.0 && x < 1.0))
                throw NotInUnitInterval("CanonicalMoments: all c_k must lie in (0, 1)");
        }
    }

    std::size_t order() const { return (c.size() + 1) / 2; }  // N

    std::vector<double> c;
};

/// a_1 = xi_1, a_n = xi_{2n-2} + xi_{2n-1}, b_n = xi_{2n-1} xi_{2n}.
inline JacobiCoefficients xi_to_ab(const XiParams& p) {
    const std::size_t n = p.order();
    std::vector<double> a(n), b(n - 1);
    a[0] = p.xi[0];
    for (std::size_t k = 1; k < n; ++k) a[k] = p.xi[2 * k - 1] + p.xi[2 * k];
    for (std::size_t k = 0; k + 1 < n; ++k) b[k] = p.xi[2 * k] * p.xi[2 * k + 1];
    return JacobiCoefficients(std::move(a), std::move(b));
}

/// Inverse of xi_to_ab by the scalar Cholesky recursion
///   xi_1 = a_1,  xi_{2n} = b_n / xi_{2n-1},  xi_{2n+1} = a_{n+1} - xi_{2n}.
/// Succeeds exactly when the Jacobi matrix is positive definite.
inline XiParams ab_to_xi(const JacobiCoefficients& j) {
    const std::size_t n = j.size();
    std::vector<double> xi(2 * n - 1);
    xi[0] = j.a(0);
    if (!(xi[0] > 0.0)) throw NotPositiveDefinite("ab_to_xi: matrix is not positive definite");
    for (std::size_t k = 0; k + 1 < n; ++k) {
        xi[2 * k + 1] = j.b(k) / xi[2 * k];
        xi[2 * k + 2] = j.a(k + 1) - xi[2 * k + 1];
        if (!(xi[2 * k + 2] > 0.0))
            throw NotPositiveDefinite("ab_to_xi: matrix is not positive definite");
    }
    return XiParams(std::move(xi));
}

/// xi_1 = c_1, xi_n = (1 - c_{n-1}) c_n.
inline XiParams c_to_xi(const CanonicalMoments& cm) {
    std::vector<double> xi(cm.c.size());
    xi[0] = cm.c[0];
    for (std::size_t k = 1; k < cm.c.size(); ++k) xi[k] = (1.0 - cm.c[k - 1]) * cm.c[k];
    return XiParams(std::move(xi));
}

/// Inverse of c_to_xi: c_1 = xi_1, c_n = xi_n / (1 - c_{n-1}).  Succeeds
/// exactly when the measure is supported in (0, 1).
inline CanonicalMoments xi_to_c(const XiParams& p) {
    std::vector<double> c(p.xi.size());
    double prev = 0.0;
    for (std::size_t k = 0; k < p.xi.size(); ++k) {
        const double denom = 1.0 - prev;
        const double ck = p.xi[k] / denom;
        if (!(ck > 0.0 && ck < 1.0))
            throw NotInUnitInterval("xi_to_c: spectrum is not contained in (0, 1)");
        c[k] = ck;
        prev = ck;
    }
    return CanonicalMoments(std::move(c));
}

}  // namespace betaforge
