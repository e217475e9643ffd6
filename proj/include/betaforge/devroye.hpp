#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "betaforge/conditional.hpp"
#include "betaforge/errors.hpp"
#include "betaforge/rng.hpp"

namespace betaforge {

struct DevroyeStats {
    std::uint64_t trials = 0;
    std::uint64_t draws = 0;

    double acceptance_rate() const {
        return trials == 0 ? 0.0 : static_cast<double>(draws) / static_cast<double>(trials);
    }
};

namespace detail {

struct DevroyeEnvelope {
    double mode = 0.0;
    double log_pi_mode = 0.0;
    double u = 0.0;  // <= 0, half of the left quarter-height offset
    double v = 0.0;  // > 0, half of the right quarter-height offset
    double log_r_u = 0.0;  // log(pi(m+u)/pi(m))
    double log_r_v = 0.0;
};

constexpr double kLn4 = 1.3862943611198906;

/// Mode of the conditional.  poly is convex here, so the stationarity
/// condition has a unique root found by geometric bracket growth + bisection.
inline double conditional_mode(const ConditionalDensity& d) {
    const Poly dp = d.poly.deriv();
    if (d.kind == EntryKind::diagonal) {
        double hi = 1.0;
        while (dp(hi) < 0.0 && hi < 1e12) hi *= 2.0;
        double lo = -1.0;
        while (dp(lo) > 0.0 && lo > -1e12) lo *= 2.0;
        for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
            const double mid = 0.5 * (lo + hi);
            (dp(mid) < 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
    // off-diagonal: s(b) = (shape - 1)/b - poly'(b) is strictly decreasing
    const double gm1 = d.shape - 1.0;
    auto s = [&](double b) { return gm1 / b - dp(b); };
    if (gm1 == 0.0 && dp(0.0) >= 0.0) return 0.0;  // boundary mode
    double lo = 1.0;
    while (s(lo) < 0.0 && lo > 1e-300) lo *= 0.5;
    double hi = 1.0;
    while (s(hi) > 0.0 && hi < 1e12) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        (s(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Solve log pi(m + x) = log pi(m) - log 4 on one side by geometric growth
/// and 80 bisection steps.  `sign` is +1 (right) or -1 (left); `floor_x` is
/// the support boundary in offset coordinates (-inf when unconstrained).
/// Returns the clamped solution x'.
template <typename LogRel>
inline double quarter_height_offset(const LogRel& rel, double sign, double floor_x) {
    double step = 1e-3;
    double inner = 0.0;  // rel(inner) > -ln4
    double outer = 0.0;
    for (;;) {
        outer = sign * step;
        if (sign < 0.0 && outer <= floor_x) {
            outer = floor_x;
            if (rel(outer) > -kLn4) return floor_x;  // density still above 1/4 at the edge
            break;
        }
        if (rel(outer) <= -kLn4) break;
        inner = outer;
        step *= 2.0;
        if (step > 1e15) throw NotLogConcave("devroye: quarter-height point not found");
    }
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (inner + outer);
        (rel(mid) > -kLn4 ? inner : outer) = mid;
    }
    return 0.5 * (inner + outer);
}

inline DevroyeEnvelope build_envelope(const ConditionalDensity& d) {
    DevroyeEnvelope env;
    env.mode = conditional_mode(d);
    env.log_pi_mode = d.log_density(env.mode);

    auto rel = [&](double x) { return d.log_density(env.mode + x) - env.log_pi_mode; };

    env.v = 0.5 * quarter_height_offset(rel, +1.0, -std::numeric_limits<double>::infinity());
    const double floor_x =
        d.kind == EntryKind::off_diagonal ? -env.mode : -std::numeric_limits<double>::infinity();
    if (floor_x >= -1e-14 * std::max(1.0, std::abs(env.mode))) {
        env.u = 0.0;  // mode at the support boundary: one-sided envelope
    } else {
        env.u = 0.5 * quarter_height_offset(rel, -1.0, floor_x);
    }
    env.log_r_u = env.u < 0.0 ? rel(env.u) : 0.0;
    env.log_r_v = rel(env.v);
    return env;
}

}  // namespace detail

/// Exact draw from a log-concave conditional by rejection against the
/// three-plateau, two-exponential-tail dominating function: central plateau
/// pi(m) on [m+u, m+v], side plateaus pi(m+u) and pi(m+v) on the next |u| and
/// v, and tails pi(m) 4^(-|t|/(2u or 2v)) beyond, where u'/2 = u < 0 < v = v'/2
/// and u', v' solve pi(m + x) = pi(m)/4.
inline double devroye_sample(const ConditionalDensity& d, RngStream& rng,
                             DevroyeStats* stats = nullptr) {
    if (!is_log_concave(d))
        throw NotLogConcave("devroye_sample: conditional is not certified log-concave");

    const detail::DevroyeEnvelope env = detail::build_envelope(d);
    const double au = -env.u;  // |u| >= 0
    const double v = env.v;
    const double ru = std::exp(env.log_r_u);
    const double rv = std::exp(env.log_r_v);

    // piece masses relative to pi(m)
    const double m_central = v + au;
    const double m_left = au * ru;
    const double m_right = v * rv;
    const double m_ltail = au > 0.0 ? 0.25 * (2.0 * au / detail::kLn4) : 0.0;
    const double m_rtail = 0.25 * (2.0 * v / detail::kLn4);
    const double total = m_central + m_left + m_right + m_ltail + m_rtail;

    for (int trial = 0; trial < 100000; ++trial) {
        if (stats) ++stats->trials;
        double pick = rng.uniform01() * total;
        double t, log_h;
        if (pick < m_central) {
            t = env.u + m_central * rng.uniform01();
            log_h = 0.0;
        } else if ((pick -= m_central) < m_left) {
            t = -2.0 * au + au * rng.uniform01();
            log_h = env.log_r_u;
        } else if ((pick -= m_left) < m_right) {
            t = v + v * rng.uniform01();
            log_h = env.log_r_v;
        } else if ((pick -= m_right) < m_ltail) {
            t = -2.0 * au + 2.0 * au * std::log(rng.uniform01()) / detail::kLn4;
            log_h = detail::kLn4 * t / (2.0 * au);
        } else {
            t = 2.0 * v - 2.0 * v * std::log(rng.uniform01()) / detail::kLn4;
            log_h = -detail::kLn4 * t / (2.0 * v);
        }
        const double log_pi_rel = d.log_density(env.mode + t) - env.log_pi_mode;
        if (std::log(rng.uniform01()) <= log_pi_rel - log_h) {
            if (stats) ++stats->draws;
            return env.mode + t;
        }
    }
    throw ConvergenceFailure("devroye_sample: rejection loop failed to accept");
}

}  // namespace betaforge
