#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "betaforge/errors.hpp"
#include "betaforge/potential.hpp"

namespace betaforge {

struct Interval {
    double lo;
    double hi;
};

/// Large-N limiting spectral law: support, pdf/cdf evaluators, and the
/// square-root coefficient c with pdf(x) ~ c sqrt(E - x) at the right edge E
/// (absent for hard edges like the arcsine law).
struct EquilibriumMeasure {
    std::vector<Interval> support;
    std::function<double(double)> pdf;
    std::function<double(double)> cdf;
    double right_edge = 0.0;
    std::optional<double> edge_coefficient;
};

inline EquilibriumMeasure equilibrium_semicircle() {
    EquilibriumMeasure eq;
    eq.support = {{-2.0, 2.0}};
    eq.right_edge = 2.0;
    eq.edge_coefficient = 1.0 / std::numbers::pi;
    eq.pdf = [](double x) {
        if (x <= -2.0 || x >= 2.0) return 0.0;
        return std::sqrt(4.0 - x * x) / (2.0 * std::numbers::pi);
    };
    eq.cdf = [](double x) {
        if (x <= -2.0) return 0.0;
        if (x >= 2.0) return 1.0;
        return 0.5 + (0.5 * x * std::sqrt(4.0 - x * x) + 2.0 * std::asin(0.5 * x)) /
                         (2.0 * std::numbers::pi);
    };
    return eq;
}

/// Marchenko-Pastur with ratio r in (0, 1]; support [(1-sqrt r)^2, (1+sqrt r)^2].
inline EquilibriumMeasure equilibrium_marchenko_pastur(double ratio) {
    if (!(ratio > 0.0) || ratio > 1.0)
        throw ConfigError("equilibrium_marchenko_pastur: ratio must be in (0, 1]");
    const double sr = std::sqrt(ratio);
    const double a = (1.0 - sr) * (1.0 - sr);
    const double b = (1.0 + sr) * (1.0 + sr);

    EquilibriumMeasure eq;
    eq.support = {{a, b}};
    eq.right_edge = b;
    eq.edge_coefficient = std::sqrt(b - a) / (2.0 * std::numbers::pi * ratio * b);
    eq.pdf = [a, b, ratio](double x) {
        if (x <= a || x >= b) return 0.0;
        return std::sqrt((b - x) * (x - a)) / (2.0 * std::numbers::pi * ratio * x);
    };
    eq.cdf = [a, b, ratio, sr](double x) {
        if (x <= a) return 0.0;
        if (x >= b) return 1.0;
        const double s = std::sqrt((b - x) * (x - a));
        const double t2 = (1.0 + ratio) *
                          std::asin(std::clamp((1.0 + ratio - x) / (2.0 * sr), -1.0, 1.0));
        const double t3 =
            (1.0 - ratio) *
            std::asin(std::clamp(((1.0 + ratio) * x - (1.0 - ratio) * (1.0 - ratio)) /
                                     (2.0 * sr * x),
                                 -1.0, 1.0));
        return 0.5 + (s - t2 - t3) / (2.0 * std::numbers::pi * ratio);
    };
    return eq;
}

/// Arcsine law on [0, 1]; hard edges, so no square-root coefficient.
inline EquilibriumMeasure equilibrium_arcsine() {
    EquilibriumMeasure eq;
    eq.support = {{0.0, 1.0}};
    eq.right_edge = 1.0;
    eq.edge_coefficient = std::nullopt;
    eq.pdf = [](double x) {
        if (x <= 0.0 || x >= 1.0) return 0.0;
        return 1.0 / (std::numbers::pi * std::sqrt(x * (1.0 - x)));
    };
    eq.cdf = [](double x) {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return 2.0 / std::numbers::pi * std::asin(std::sqrt(x));
    };
    return eq;
}

enum class ClassicalLimit { semicircle, marchenko_pastur, arcsine };

inline EquilibriumMeasure equilibrium_classical(ClassicalLimit kind, double param = 1.0) {
    switch (kind) {
        case ClassicalLimit::semicircle: return equilibrium_semicircle();
        case ClassicalLimit::marchenko_pastur: return equilibrium_marchenko_pastur(param);
        case ClassicalLimit::arcsine: return equilibrium_arcsine();
    }
    throw ConfigError("equilibrium_classical: unknown kind");
}

namespace detail {

/// One-cut density on [m - s, m + s] written as a Chebyshev-U series
///   rho(m + s u) = q(u) sqrt(1 - u^2) / s,  q = sum_k q_k U_k.
struct OneCutSolution {
    double m = 0.0;
    double s = 1.0;
    std::vector<double> q;

    double q_at(double u) const {
        // U_k recurrence
        double ukm1 = 1.0, uk = 2.0 * u, acc = q.empty() ? 0.0 : q[0] * 1.0;
        for (std::size_t k = 1; k < q.size(); ++k) {
            acc += q[k] * uk;
            const double next = 2.0 * u * uk - ukm1;
            ukm1 = uk;
            uk = next;
        }
        return acc;
    }

    double pdf(double x) const {
        const double u = (x - m) / s;
        if (u <= -1.0 || u >= 1.0) return 0.0;
        return q_at(u) * std::sqrt(1.0 - u * u) / s;
    }

    /// Cauchy field int rho(y)/(x - y) dy outside the support, |t| > 1,
    /// from the closed form of the Chebyshev-U transforms.
    double field(double t) const {
        const double w = t - std::copysign(std::sqrt(t * t - 1.0), t);
        double pw = w, acc = 0.0;
        for (double qk : q) {
            acc += qk * pw;
            pw *= w;
        }
        return std::numbers::pi * acc / s;
    }

    // integral of q(u) sqrt(1-u^2) du from -1 to (x-m)/s, via the closed
    // antiderivatives of U_k(cos psi) sin^2 psi
    double cdf(double x) const {
        const double u = std::clamp((x - m) / s, -1.0, 1.0);
        const double phi = std::acos(u);
        double acc = 0.0;
        for (std::size_t k = 0; k < q.size(); ++k) {
            double upper, lower;
            if (k == 0) {
                upper = -0.5 * (phi - 0.5 * std::sin(2.0 * phi));
                lower = -0.5 * std::numbers::pi;
            } else {
                const double kk = static_cast<double>(k);
                upper = -0.5 * (std::sin(kk * phi) / kk -
                                std::sin((kk + 2.0) * phi) / (kk + 2.0));
                lower = 0.0;
            }
            acc += q[k] * (upper - lower);
        }
        return acc;
    }
};

/// Chebyshev-T coefficients r_0..r_{deg} of t -> f(m + s t) on [-1, 1].
inline std::vector<double> chebyshev_coeffs(const std::function<double(double)>& f, double m,
                                            double s, int deg) {
    const int k = 16;  // exact for polynomial f with deg f <= 15
    std::vector<double> vals(k);
    for (int i = 0; i < k; ++i) {
        const double theta = std::numbers::pi * (i + 0.5) / k;
        vals[i] = f(m + s * std::cos(theta));
    }
    std::vector<double> r(static_cast<std::size_t>(deg) + 1, 0.0);
    for (int j = 0; j <= deg; ++j) {
        double acc = 0.0;
        for (int i = 0; i < k; ++i)
            acc += vals[i] * std::cos(j * std::numbers::pi * (i + 0.5) / k);
        r[static_cast<std::size_t>(j)] = (j == 0 ? 1.0 : 2.0) * acc / k;
    }
    return r;
}

/// Variational admissibility outside the support: the effective potential
/// must not drop below its edge value, i.e. the cumulative of
/// half_vp - field along the right ray (and its mirror on the left) stays
/// nonnegative.  This is what rules out single-interval "solutions" sitting
/// in one well of a multi-well potential.
inline bool external_field_ok(const OneCutSolution& sol,
                              const std::function<double(double)>& half_vp,
                              double left_limit) {
    const int npts = 160;
    // far enough to look into any secondary well of a rival support component
    const double reach = std::max(3.0, 10.0 / sol.s);
    double scale = 1.0;

    double cum = 0.0, prev_d = 0.0;
    for (int i = 1; i <= npts; ++i) {
        const double t = 1.0 + reach * i / npts;
        const double d = half_vp(sol.m + sol.s * t) - sol.field(t);
        cum += 0.5 * (d + prev_d) * (reach / npts) * sol.s;
        prev_d = d;
        scale = std::max(scale, std::abs(d));
        if (cum < -1e-6 * scale * sol.s) return false;
    }

    const double t_floor =
        std::isfinite(left_limit) ? std::max(-1.0 - reach, (left_limit - sol.m) / sol.s)
                                  : -1.0 - reach;
    if (t_floor >= -1.0) return true;  // no room on the left
    cum = 0.0;
    prev_d = 0.0;
    for (int i = 1; i <= npts; ++i) {
        const double t = -1.0 + (t_floor + 1.0) * i / npts;
        const double d = sol.field(t) - half_vp(sol.m + sol.s * t);
        cum += 0.5 * (d + prev_d) * ((-t_floor - 1.0) / npts) * sol.s;
        prev_d = d;
        scale = std::max(scale, std::abs(d));
        if (cum < -1e-6 * scale * sol.s) return false;
    }
    return true;
}

/// Solve the one-cut equilibrium conditions for half-derivative f = V'/2:
///   r_0(m, s) = 0  and  s r_1(m, s) = 2,
/// where r_j are the Chebyshev-T coefficients of f(m + s t).  The density
/// coefficients follow as q_k = s r_{k+1} / pi.  left_limit, when finite,
/// restricts the admissible axis (used by the z-space two-cut reduction).
inline std::optional<OneCutSolution> solve_one_cut(const std::function<double(double)>& half_vp,
                                                   int deriv_degree, bool even,
                                                   double m0, double s0,
                                                   double left_limit =
                                                       -std::numeric_limits<double>::infinity()) {
    double m = even ? 0.0 : m0;
    double s = s0;

    auto residual = [&](double mm, double ss) {
        const auto r = chebyshev_coeffs(half_vp, mm, ss, deriv_degree);
        return std::array<double, 2>{r[0], ss * r[1] - 2.0};
    };

    for (int it = 0; it < 200; ++it) {
        const auto f0 = residual(m, s);
        const double err = std::abs(f0[0]) + std::abs(f0[1]);
        if (err < 1e-13) break;
        const double hm = 1e-7 * std::max(1.0, std::abs(m));
        const double hs = 1e-7 * std::max(1.0, std::abs(s));
        const auto fs = residual(m, s + hs);
        double dm = 0.0, ds;
        if (even) {
            ds = -f0[1] / ((fs[1] - f0[1]) / hs);
        } else {
            const auto fm = residual(m + hm, s);
            const double j00 = (fm[0] - f0[0]) / hm, j01 = (fs[0] - f0[0]) / hs;
            const double j10 = (fm[1] - f0[1]) / hm, j11 = (fs[1] - f0[1]) / hs;
            const double det = j00 * j11 - j01 * j10;
            if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
            dm = -(j11 * f0[0] - j01 * f0[1]) / det;
            ds = -(-j10 * f0[0] + j00 * f0[1]) / det;
        }
        // damp steps that would leave the admissible region
        double lambda = 1.0;
        while (s + lambda * ds <= 0.0 && lambda > 1e-6) lambda *= 0.5;
        m += lambda * dm;
        s += lambda * ds;
        if (!std::isfinite(m) || !std::isfinite(s)) return std::nullopt;
    }

    const auto f0 = residual(m, s);
    if (std::abs(f0[0]) + std::abs(f0[1]) > 1e-9) return std::nullopt;

    OneCutSolution sol;
    sol.m = m;
    sol.s = s;
    const auto r = chebyshev_coeffs(half_vp, m, s, deriv_degree);
    sol.q.resize(static_cast<std::size_t>(deriv_degree));
    for (int k = 0; k + 1 <= deriv_degree; ++k)
        sol.q[static_cast<std::size_t>(k)] = s * r[static_cast<std::size_t>(k) + 1] /
                                             std::numbers::pi;
    while (sol.q.size() > 1 && std::abs(sol.q.back()) < 1e-14) sol.q.pop_back();

    // admissibility: density must be nonnegative on the support, and the
    // effective potential must not dip below its edge level outside it
    double qmin = 0.0, qmax = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double u = -1.0 + 2.0 * i / 400.0;
        const double v = sol.q_at(u);
        qmin = std::min(qmin, v);
        qmax = std::max(qmax, v);
    }
    if (qmin < -1e-9 * std::max(1.0, qmax)) return std::nullopt;
    if (!external_field_ok(sol, half_vp, left_limit)) return std::nullopt;
    return sol;
}

}  // namespace detail

/// Equilibrium measure of the rescaled ensemble with potential V: density
/// (polynomial) * sqrt((E+ - x)(x - E-)) on one interval, or the symmetric
/// two-cut analogue for even V, determined from the normalization and
/// principal-value conditions via a Chebyshev expansion of the polynomial
/// factor.  Asymmetric multi-cut cases are rejected.
inline EquilibriumMeasure equilibrium_polynomial(const PolynomialPotential& v) {
    v.validate();
    const bool even = v.g1 == 0.0 && v.g3 == 0.0;
    const int deg = v.degree();

    auto half_vp = [v](double x) { return 0.5 * v.deriv(x); };

    // one-cut attempt (several bracket starts; the nonlinear system can have
    // spurious roots in the two-cut regime)
    std::optional<detail::OneCutSolution> one;
    for (double s0 : {2.0, 1.0, 4.0, 0.5, 8.0}) {
        double m0 = 0.0;
        if (!even) {
            double best = v.value(0.0);
            for (int i = -400; i <= 400; ++i) {
                const double x = 0.05 * i;
                if (v.value(x) < best) {
                    best = v.value(x);
                    m0 = x;
                }
            }
        }
        one = detail::solve_one_cut(half_vp, deg - 1, even, m0, s0);
        if (one) break;
    }

    if (one) {
        const detail::OneCutSolution sol = *one;
        EquilibriumMeasure eq;
        eq.support = {{sol.m - sol.s, sol.m + sol.s}};
        eq.right_edge = sol.m + sol.s;
        eq.edge_coefficient = std::sqrt(2.0) * sol.q_at(1.0) / std::pow(sol.s, 1.5);
        eq.pdf = [sol](double x) { return sol.pdf(x); };
        eq.cdf = [sol](double x) { return std::clamp(sol.cdf(x), 0.0, 1.0); };
        return eq;
    }

    if (!even)
        throw UnsupportedPotential(
            "equilibrium_polynomial: no admissible one-cut solution for an asymmetric "
            "potential");

    // symmetric two-cut: in z = x^2 the problem is one-cut again with the
    // transformed derivative D(z) = V'(sqrt z)/sqrt z, a polynomial in z
    auto half_d = [v](double z) { return 0.5 * (6.0 * v.g6 * z * z + 4.0 * v.g4 * z + 2.0 * v.g2); };
    std::optional<detail::OneCutSolution> two;
    for (double scale : {1.0, 2.0, 4.0, 0.5, 8.0}) {
        two = detail::solve_one_cut(half_d, deg / 2 - 1, false, scale, 0.9 * scale, 0.0);
        if (two && two->m - two->s > -1e-8 * two->s) break;
        two.reset();
    }
    if (!two)
        throw UnsupportedPotential("equilibrium_polynomial: no admissible one- or two-cut solution");

    detail::OneCutSolution nu = *two;
    if (nu.m - nu.s < 0.0) nu.s = nu.m;  // clamp a merged inner edge to 0
    const double alpha = std::max(0.0, nu.m - nu.s);
    const double beta_edge = nu.m + nu.s;
    const double b_out = std::sqrt(beta_edge);
    const double a_in = std::sqrt(alpha);

    EquilibriumMeasure eq;
    eq.support = {{-b_out, -a_in}, {a_in, b_out}};
    eq.right_edge = b_out;
    eq.edge_coefficient = 2.0 * std::pow(b_out, 1.5) * nu.q_at(1.0) / std::pow(nu.s, 1.5);
    eq.pdf = [nu](double x) { return std::abs(x) * nu.pdf(x * x); };
    eq.cdf = [nu](double x) {
        const double fz = std::clamp(nu.cdf(x * x), 0.0, 1.0);
        return x >= 0.0 ? 0.5 + 0.5 * fz : 0.5 - 0.5 * fz;
    };
    return eq;
}

/// Soft-edge rescaling s = (x_max - E) N^(2/3) (pi c)^(2/3): with density
/// c sqrt(E - x) at the edge, this makes s asymptotically Tracy-Widom for
/// beta = 2.
inline double edge_rescale(double x_max, std::size_t n, const EquilibriumMeasure& eq) {
    if (!eq.edge_coefficient)
        throw NoSoftEdge("edge_rescale: measure has no square-root right edge");
    const double c = *eq.edge_coefficient;
    return (x_max - eq.right_edge) * std::pow(static_cast<double>(n), 2.0 / 3.0) *
           std::pow(std::numbers::pi * c, 2.0 / 3.0);
}

/// Least-squares fit of pdf(x)/sqrt(E - x) over the last 2% of the rightmost
/// support interval; cross-check for the analytic edge coefficients.
inline double fit_edge_coefficient(const EquilibriumMeasure& eq) {
    const Interval band = eq.support.back();
    const double len = band.hi - band.lo;
    const double lo = band.hi - 0.02 * len;
    double acc = 0.0;
    const int n = 64;
    for (int i = 0; i < n; ++i) {
        const double x = lo + (band.hi - lo) * (i + 0.5) / n;
        acc += eq.pdf(x) / std::sqrt(band.hi - x);
    }
    return acc / n;
}

}  // namespace betaforge
