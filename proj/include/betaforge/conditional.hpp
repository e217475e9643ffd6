#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "betaforge/errors.hpp"
#include "betaforge/jacobi.hpp"
#include "betaforge/poly.hpp"
#include "betaforge/potential.hpp"

namespace betaforge {

enum class EntryKind { diagonal, off_diagonal };

/// Full conditional of a single Jacobi coefficient given the rest:
///   diagonal      p(t) ∝ exp(-poly(t))              on R,
///   off-diagonal  p(t) ∝ t^(shape-1) exp(-poly(t))  on (0, inf).
/// poly carries no constant term; shape is (beta/2)(N - n) for entry b_n.
struct ConditionalDensity {
    EntryKind kind = EntryKind::diagonal;
    std::size_t index = 0;  // 0-based coefficient index
    Poly poly;
    double shape = 0.0;

    double log_density(double t) const {
        if (kind == EntryKind::off_diagonal) {
            if (t == 0.0 && shape == 1.0) return -poly(0.0);  // continuous boundary
            if (!(t > 0.0)) return -std::numeric_limits<double>::infinity();
            return (shape - 1.0) * std::log(t) - poly(t);
        }
        return -poly(t);
    }

    double grad_log_density(double t) const {
        double g = -poly.deriv()(t);
        if (kind == EntryKind::off_diagonal) g += (shape - 1.0) / t;
        return g;
    }
};

namespace detail {

/// tr W(T_t) over the index window, where the window submatrix T_t has one
/// entry replaced by t.  The window is exactly wide enough that every closed
/// walk of length <= deg V through the modified entry stays inside it, so the
/// t-dependent part of tr W(J) is reproduced exactly and coefficients outside
/// the window never enter at all.
struct WindowedTrace {
    std::vector<double> a, b;
    std::size_t slot;  // position of the modified entry within the window
    bool diagonal;
    double scale;  // kappa = (beta N / 2) or 1
    const PolynomialPotential* v;

    double operator()(double t) const {
        std::vector<double> aw = a, bw = b;
        if (diagonal)
            aw[slot] = t;
        else
            bw[slot] = t;
        const auto tr = tridiagonal_power_traces(aw, bw);
        return scale * (v->g1 * tr[1] + v->g2 * tr[2] + v->g3 * tr[3] + v->g4 * tr[4] +
                        v->g6 * tr[6]);
    }
};

inline Poly fit_conditional_poly(const WindowedTrace& f, double lo, double hi,
                                 std::size_t npts) {
    std::vector<double> nodes(npts), values(npts);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (std::size_t k = 0; k < npts; ++k) {
        nodes[k] = mid + half * std::cos(std::numbers::pi * (2.0 * k + 1.0) / (2.0 * npts));
        values[k] = f(nodes[k]);
    }
    Poly p = interpolate_poly(nodes, values);
    p.c[0] = 0.0;  // normalization constant is irrelevant
    return p;
}

}  // namespace detail

/// Exact polynomial part of -log p(a_n | rest), by evaluating the windowed
/// trace at Chebyshev abscissae and solving the interpolation system.
/// n is the 0-based diagonal index.
inline ConditionalDensity conditional_for_a(std::size_t n, const JacobiCoefficients& j,
                                            const PolynomialPotential& v, double beta) {
    if (n >= j.size()) throw LengthMismatch("conditional_for_a: index out of range");
    const std::size_t radius = static_cast<std::size_t>(v.degree() / 2);
    const std::size_t lo = n >= radius ? n - radius : 0;
    const std::size_t hi = std::min(j.size() - 1, n + radius);  // inclusive row range

    detail::WindowedTrace f;
    f.a.assign(j.a().begin() + static_cast<std::ptrdiff_t>(lo),
               j.a().begin() + static_cast<std::ptrdiff_t>(hi + 1));
    f.b.assign(j.b().begin() + static_cast<std::ptrdiff_t>(lo),
               j.b().begin() + static_cast<std::ptrdiff_t>(hi));
    f.slot = n - lo;
    f.diagonal = true;
    f.scale = v.scale(beta, j.size());
    f.v = &v;

    const double center = j.a(n);
    const double half = std::max(1.0, std::abs(center));
    ConditionalDensity d;
    d.kind = EntryKind::diagonal;
    d.index = n;
    d.poly = detail::fit_conditional_poly(f, center - half, center + half,
                                          static_cast<std::size_t>(v.degree()) + 1);
    return d;
}

/// Shape exponent and polynomial part of -log p(b_n | rest); n is the 0-based
/// off-diagonal index.  The trace is a polynomial of degree deg V / 2 in b_n.
inline ConditionalDensity conditional_for_b(std::size_t n, const JacobiCoefficients& j,
                                            const PolynomialPotential& v, double beta) {
    if (n + 1 >= j.size()) throw LengthMismatch("conditional_for_b: index out of range");
    const std::size_t deg = static_cast<std::size_t>(v.degree() / 2);
    const std::size_t radius = deg == 0 ? 0 : deg - 1;
    const std::size_t lo = n >= radius ? n - radius : 0;
    const std::size_t hi = std::min(j.size() - 1, n + 1 + radius);  // inclusive row range

    detail::WindowedTrace f;
    f.a.assign(j.a().begin() + static_cast<std::ptrdiff_t>(lo),
               j.a().begin() + static_cast<std::ptrdiff_t>(hi + 1));
    f.b.assign(j.b().begin() + static_cast<std::ptrdiff_t>(lo),
               j.b().begin() + static_cast<std::ptrdiff_t>(hi));
    f.slot = n - lo;
    f.diagonal = false;
    f.scale = v.scale(beta, j.size());
    f.v = &v;

    const double hi_node = 2.0 * std::max(j.b(n), 1.0);
    ConditionalDensity d;
    d.kind = EntryKind::off_diagonal;
    d.index = n;
    d.poly = detail::fit_conditional_poly(f, 0.0, hi_node, deg + 1);
    d.shape = 0.5 * beta * static_cast<double>(j.size() - 1 - n);
    return d;
}

/// Certificate used to pick the sampling kernel.  Diagonal conditionals must
/// have a convex polynomial with positive even leading term; off-diagonal
/// ones additionally need shape >= 1, since the t^(shape-1) factor destroys
/// log-concavity near 0 otherwise.
inline bool is_log_concave(const ConditionalDensity& d) {
    const Poly& p = d.poly;
    double mag = 1.0;
    for (double c : p.c) mag = std::max(mag, std::abs(c));
    const double tol = 1e-12 * mag;

    const int deg = p.degree();
    if (deg == 0) return false;  // not integrable
    if (p.c[deg] < 0.0) return false;

    if (d.kind == EntryKind::off_diagonal) {
        if (d.shape < 1.0) return false;
        // poly'' = 6 p3 t + 2 p2 must be >= 0 on (0, inf)
        return p.c[3] >= -tol && p.c[2] >= -tol && p.c[4] == 0.0 && p.c[5] == 0.0 &&
               p.c[6] == 0.0;
    }

    if (deg % 2 != 0) return false;  // not integrable on R
    const Poly q = p.deriv().deriv();
    if (q.degree() == 0) return q.c[0] >= -tol;
    if (q.degree() % 2 != 0) return false;  // poly'' unbounded below
    if (q.degree() == 2)
        return q.c[2] > 0.0 && q.c[0] - 0.25 * q.c[1] * q.c[1] / q.c[2] >= -tol;
    // degree 4: minimum of q over R is attained at a critical point
    const double bound = detail::root_bound(q.deriv());
    double qmin = std::min(q(-bound), q(bound));
    for (double r : detail::real_roots_bisect(q.deriv(), -bound, bound))
        qmin = std::min(qmin, q(r));
    return qmin >= -tol;
}

}  // namespace betaforge
