#pragma once

#include <cmath>
#include <cstdint>

#include "betaforge/conditional.hpp"
#include "betaforge/rng.hpp"

namespace betaforge {

namespace detail {

/// Target seen by the MALA kernel: diagonal conditionals are sampled in
/// natural coordinates; off-diagonal ones in y = log b, where the chain
/// targets shape * y - poly(e^y) (the Jacobian folds the -1 into the
/// exponent).
struct MalaTarget {
    const ConditionalDensity* d;

    bool log_coords() const { return d->kind == EntryKind::off_diagonal; }

    double to_chain(double x) const { return log_coords() ? std::log(x) : x; }
    double from_chain(double y) const { return log_coords() ? std::exp(y) : y; }

    double log_density(double y) const {
        if (!log_coords()) return -d->poly(y);
        const double b = std::exp(y);
        return d->shape * y - d->poly(b);
    }

    double grad_log_density(double y) const {
        if (!log_coords()) return -d->poly.deriv()(y);
        const double b = std::exp(y);
        return d->shape - b * d->poly.deriv()(b);
    }
};

}  // namespace detail

/// log of the Metropolis-Hastings ratio for one Langevin proposal y -> yp
/// with step size `step`:  log pi(yp) - log pi(y) + log q(y|yp) - log q(yp|y).
inline double mala_log_accept_ratio(const detail::MalaTarget& target, double y, double yp,
                                    double step) {
    const double s2 = step * step;
    const double fwd = yp - y - 0.5 * s2 * target.grad_log_density(y);
    const double bwd = y - yp - 0.5 * s2 * target.grad_log_density(yp);
    return target.log_density(yp) - target.log_density(y) +
           (fwd * fwd - bwd * bwd) / (2.0 * s2);
}

/// Endpoint of nsteps Metropolis-adjusted Langevin transitions targeting d,
/// started from x0.  Counts accepted proposals into *accepted when given.
inline double mala_update(const ConditionalDensity& d, double x0, double step, int nsteps,
                          RngStream& rng, std::uint64_t* accepted = nullptr) {
    const detail::MalaTarget target{&d};
    double y = target.to_chain(x0);
    for (int k = 0; k < nsteps; ++k) {
        const double drift = 0.5 * step * step * target.grad_log_density(y);
        const double yp = y + drift + step * rng.normal();
        if (std::log(rng.uniform01()) <= mala_log_accept_ratio(target, y, yp, step)) {
            y = yp;
            if (accepted) ++*accepted;
        }
    }
    return target.from_chain(y);
}

}  // namespace betaforge
