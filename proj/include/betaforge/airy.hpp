#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace betaforge {

struct AiryValue {
    double ai;
    double ai_prime;
};

namespace detail {

inline constexpr double kAiZero = 0.35502805388781723926;    // 3^(-2/3) / Gamma(2/3)
inline constexpr double kAiPrimeZero = 0.25881940379280679841;  // 3^(-1/3) / Gamma(1/3)

/// Maclaurin series of the two standard solutions f, g of y'' = x y and their
/// derivatives; Ai = Ai(0) f - |Ai'(0)| g.  Safe up to |x| ~ 5: the positive-x
/// cancellation between f and g stays below ~e^(2 zeta) ~ 6e5 there.
inline AiryValue airy_maclaurin(double x) {
    const double x3 = x * x * x;
    double f = 1.0, fp = 0.0, g = x, gp = 1.0;
    double tf = 1.0, tg = x, tfp = 0.5 * x * x, tgp = 1.0;
    for (int k = 0; k < 60; ++k) {
        const double dk = static_cast<double>(k);
        // next terms of f and g
        tf *= x3 / ((3.0 * dk + 2.0) * (3.0 * dk + 3.0));
        tg *= x3 / ((3.0 * dk + 3.0) * (3.0 * dk + 4.0));
        // f' terms: s_1 = x^2/2, then s_{k+1} = s_k x^3 (k+1) / (k (3k+2)(3k+3))
        if (k == 0) {
            fp += tfp;
        } else {
            tfp *= x3 * (dk + 1.0) / (dk * (3.0 * dk + 2.0) * (3.0 * dk + 3.0));
            fp += tfp;
        }
        tgp *= x3 / ((3.0 * dk + 1.0) * (3.0 * dk + 3.0));
        f += tf;
        g += tg;
        gp += tgp;
        const double scale = std::abs(f) + std::abs(g) + 1.0;
        if (std::abs(tf) < 1e-19 * scale && std::abs(tg) < 1e-19 * scale && k > 4) break;
    }
    return {kAiZero * f - kAiPrimeZero * g, kAiZero * fp - kAiPrimeZero * gp};
}

/// Poincare coefficients u_k and v_k (DLMF 9.7.2) up to index 24.
struct AiryAsymptoticTables {
    std::array<double, 25> u{};
    std::array<double, 25> v{};
    constexpr AiryAsymptoticTables() {
        u[0] = 1.0;
        v[0] = 1.0;
        for (int k = 0; k + 1 < 25; ++k) {
            const double dk = k;
            u[k + 1] = u[k] * (3.0 * dk + 2.5) * (3.0 * dk + 1.5) * (3.0 * dk + 0.5) /
                       (54.0 * (dk + 1.0) * (dk + 0.5));
            v[k + 1] = u[k + 1] * (6.0 * (dk + 1.0) + 1.0) / (1.0 - 6.0 * (dk + 1.0));
        }
    }
};

inline constexpr AiryAsymptoticTables kAiryTables{};

/// Exponentially decaying branch, x >= 12: truncated asymptotic series reach
/// below 1e-15 relative there.
inline AiryValue airy_asymptotic_pos(double x) {
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    double su = 0.0, sv = 0.0, pw = 1.0;
    for (int k = 0; k < 22; ++k) {
        su += kAiryTables.u[static_cast<std::size_t>(k)] * pw;
        sv += kAiryTables.v[static_cast<std::size_t>(k)] * pw;
        pw *= -1.0 / zeta;
    }
    const double root = std::sqrt(std::numbers::pi);
    const double q = std::pow(x, 0.25);
    const double damp = std::exp(-zeta);
    return {damp / (2.0 * root * q) * su, -damp * q / (2.0 * root) * sv};
}

/// Oscillatory branch, x <= -12.
inline AiryValue airy_asymptotic_neg(double x) {
    const double z = -x;
    const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
    double se = 0.0, so = 0.0, de = 0.0, dv = 0.0;
    double pw = 1.0;  // (-1)^k zeta^(-2k)
    for (int k = 0; 2 * k + 1 < 22; ++k) {
        se += kAiryTables.u[static_cast<std::size_t>(2 * k)] * pw;
        de += kAiryTables.v[static_cast<std::size_t>(2 * k)] * pw;
        so += kAiryTables.u[static_cast<std::size_t>(2 * k + 1)] * pw / zeta;
        dv += kAiryTables.v[static_cast<std::size_t>(2 * k + 1)] * pw / zeta;
        pw *= -1.0 / (zeta * zeta);
    }
    const double c = std::cos(zeta - 0.25 * std::numbers::pi);
    const double s = std::sin(zeta - 0.25 * std::numbers::pi);
    const double root = std::sqrt(std::numbers::pi);
    const double q = std::pow(z, 0.25);
    return {(c * se + s * so) / (root * q), (s * de - c * dv) * q / root};
}

/// One Taylor step of y'' = x y from x0 to x0 + h using the coefficient
/// recurrence c_{k+2} = (x0 c_k + c_{k-1}) / ((k+1)(k+2)).
inline AiryValue airy_taylor_step(double x0, AiryValue y, double h) {
    double ckm1 = 0.0, ck = y.ai, ckp1 = y.ai_prime;
    double val = ck + ckp1 * h;
    double der = ckp1;
    double hp = h;  // h^k during the loop below (k starting at 1)
    for (int k = 0; k < 40; ++k) {
        const double ckp2 =
            (x0 * ck + ckm1) / ((static_cast<double>(k) + 1.0) * (static_cast<double>(k) + 2.0));
        ckm1 = ck;
        ck = ckp1;
        ckp1 = ckp2;
        // term for value: c_{k+2} h^{k+2}; for derivative: (k+2) c_{k+2} h^{k+1}
        der += (static_cast<double>(k) + 2.0) * ckp2 * hp;
        hp *= h;
        const double tv = ckp2 * hp;
        val += tv;
        if (std::abs(tv) < 1e-19 * (std::abs(val) + 1e-300) && k > 6) break;
    }
    return {val, der};
}

/// March the ODE from a trusted seed to x in fixed steps.  Toward +infinity
/// the decaying solution dominates when integrating downward, and on the
/// oscillatory side both solutions stay bounded, so both marches are stable.
inline AiryValue airy_march(double from, AiryValue seed, double to) {
    const double span = to - from;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(span) / 0.4)));
    const double h = span / steps;
    double x = from;
    AiryValue y = seed;
    for (int i = 0; i < steps; ++i) {
        y = airy_taylor_step(x, y, h);
        x += h;
    }
    return y;
}

constexpr int kAnchorCount = 23;
constexpr double kAnchorStep = 0.4;

/// Fixed anchor grids for the bridge regions 3.2 < x < 12 and
/// -12 < x < -4.5, so nearby arguments share the same Taylor expansion point
/// and the returned values vary smoothly (one partial step per call).  The
/// positive switch sits at 3.2 because the Maclaurin cancellation already
/// costs ~e^(2 zeta) there.
struct AiryAnchors {
    std::array<AiryValue, kAnchorCount> pos;  // x = 12 - 0.4 k
    std::array<AiryValue, kAnchorCount> neg;  // x = -4.5 - 0.4 k

    AiryAnchors() {
        pos[0] = airy_asymptotic_pos(12.0);
        for (int k = 1; k < kAnchorCount; ++k)
            pos[static_cast<std::size_t>(k)] =
                airy_taylor_step(12.0 - kAnchorStep * (k - 1),
                                 pos[static_cast<std::size_t>(k - 1)], -kAnchorStep);
        neg[0] = airy_maclaurin(-4.5);
        for (int k = 1; k < kAnchorCount; ++k)
            neg[static_cast<std::size_t>(k)] =
                airy_taylor_step(-4.5 - kAnchorStep * (k - 1),
                                 neg[static_cast<std::size_t>(k - 1)], -kAnchorStep);
    }
};

inline const AiryAnchors& airy_anchors() {
    static const AiryAnchors anchors;
    return anchors;
}

}  // namespace detail

/// Airy function of the first kind and its derivative, absolute accuracy
/// better than 1e-12 on [-15, 30] (and beyond).  Maclaurin core for |x| <= 4.5;
/// asymptotic expansions for |x| >= 12; Taylor marching of the defining ODE
/// from the nearest trusted anchor in between, where plain asymptotics cannot
/// reach the target accuracy.
inline AiryValue airy(double x) {
    if (!std::isfinite(x)) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        return {x > 0.0 ? 0.0 : nan, x > 0.0 ? 0.0 : nan};  // +inf decays; -inf/nan undefined
    }
    if (x >= -4.5 && x <= 3.2) return detail::airy_maclaurin(x);
    if (x >= 12.0) return detail::airy_asymptotic_pos(x);
    if (x <= -12.0) return detail::airy_asymptotic_neg(x);
    const detail::AiryAnchors& anchors = detail::airy_anchors();
    if (x > 0.0) {
        const int k = std::min(detail::kAnchorCount - 1,
                               static_cast<int>((12.0 - x) / detail::kAnchorStep));
        const double xa = 12.0 - detail::kAnchorStep * k;
        return detail::airy_taylor_step(xa, anchors.pos[static_cast<std::size_t>(k)], x - xa);
    }
    const int k = std::min(detail::kAnchorCount - 1,
                           static_cast<int>((-4.5 - x) / detail::kAnchorStep));
    const double xa = -4.5 - detail::kAnchorStep * k;
    return detail::airy_taylor_step(xa, anchors.neg[static_cast<std::size_t>(k)], x - xa);
}

}  // namespace betaforge
