#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "betaforge/conditional.hpp"
#include "betaforge/devroye.hpp"
#include "betaforge/errors.hpp"
#include "betaforge/jacobi.hpp"
#include "betaforge/mala.hpp"
#include "betaforge/potential.hpp"
#include "betaforge/rng.hpp"
#include "betaforge/spectral.hpp"

namespace betaforge {

struct MalaConfig {
    double step_size = 0.1;
    int steps_per_update = 1;
    // Robbins-Monro adaptation of step_size toward acceptance 0.574 while
    // pass < adapt_passes; the step is frozen afterwards so the kernel keeps
    // the exact invariant law.
    int adapt_passes = 0;
};

struct KernelStats {
    DevroyeStats devroye;
    std::uint64_t mala_proposals = 0;
    std::uint64_t mala_accepts = 0;
};

/// State of one systematic-scan chain on Jacobi coefficients.  The target is
/// prod b_n^{beta/2 (N-n) - 1} exp(-tr W(J)) with W = V or (beta N / 2) V.
/// Initialization puts a_n = 0 and b_n = 1e-3: the all-zero start has b on
/// the boundary of the state space, and the first sweep resamples everything
/// anyway.
class GibbsChain {
public:
    GibbsChain(PolynomialPotential potential, std::size_t n, double beta, RngStream rng,
               MalaConfig mala = {})
        : coefficients_(std::vector<double>(n, 0.0), std::vector<double>(n > 0 ? n - 1 : 0, 1e-3)),
          potential_(potential),
          beta_(beta),
          rng_(rng),
          mala_(mala) {
        potential_.validate();
        if (!(beta > 0.0)) throw ConfigError("GibbsChain: beta must be > 0");
    }

    const JacobiCoefficients& coefficients() const { return coefficients_; }
    const PolynomialPotential& potential() const { return potential_; }
    double beta() const { return beta_; }
    long pass() const { return pass_; }
    const MalaConfig& mala() const { return mala_; }
    const KernelStats& stats() const { return stats_; }
    RngStream& rng() { return rng_; }

    /// Replace the coefficient state (e.g. to start from an exact draw).
    void set_coefficients(JacobiCoefficients j) {
        if (j.size() != coefficients_.size())
            throw LengthMismatch("GibbsChain::set_coefficients: size mismatch");
        coefficients_ = std::move(j);
    }

    void sweep() {
        const std::size_t n = coefficients_.size();
        for (std::size_t i = 0; i < n; ++i) {
            coefficients_.a(i) = draw(conditional_for_a(i, coefficients_, potential_, beta_),
                                      coefficients_.a(i));
            if (i + 1 < n) {
                coefficients_.b(i) = draw(conditional_for_b(i, coefficients_, potential_, beta_),
                                          coefficients_.b(i));
            }
        }
        ++pass_;
    }

private:
    double draw(const ConditionalDensity& cond, double current) {
        // diagonal entries follow the potential-level rule (even quartic
        // family => exact rejection sampling, anything else => MALA);
        // off-diagonal entries are certified per instance
        const bool exact = cond.kind == EntryKind::diagonal
                               ? potential_.log_concave_diagonals()
                               : is_log_concave(cond);
        if (exact) return devroye_sample(cond, rng_, &stats_.devroye);

        std::uint64_t accepted = 0;
        const double out =
            mala_update(cond, current, mala_.step_size, mala_.steps_per_update, rng_, &accepted);
        stats_.mala_proposals += static_cast<std::uint64_t>(mala_.steps_per_update);
        stats_.mala_accepts += accepted;
        if (pass_ < mala_.adapt_passes) adapt_step(accepted);
        return out;
    }

    void adapt_step(std::uint64_t accepted) {
        // Robbins-Monro toward the 1-D optimal acceptance rate
        constexpr double target = 0.574;
        const double rate =
            static_cast<double>(accepted) / static_cast<double>(mala_.steps_per_update);
        ++adapt_events_;
        const double gain = 1.0 / (target * (1.0 - target));
        mala_.step_size *=
            std::exp(gain * (rate - target) / static_cast<double>(adapt_events_));
    }

    JacobiCoefficients coefficients_;
    PolynomialPotential potential_;
    double beta_;
    long pass_ = 0;
    RngStream rng_;
    MalaConfig mala_;
    KernelStats stats_;
    std::uint64_t adapt_events_ = 0;
};

/// One full systematic sweep (a_1, b_1, a_2, b_2, ...), value in, value out.
inline GibbsChain gibbs_pass(GibbsChain chain) {
    chain.sweep();
    return chain;
}

/// Run `passes` sweeps, recording the eigenvalues of the current coefficients
/// every `snapshot_every` passes.
inline std::vector<SpectralSample> run_chain(GibbsChain& chain, int passes, int snapshot_every) {
    if (passes < 1 || snapshot_every < 1)
        throw ConfigError("run_chain: passes and snapshot_every must be >= 1");
    std::vector<SpectralSample> snapshots;
    snapshots.reserve(static_cast<std::size_t>(passes / snapshot_every));
    for (int t = 1; t <= passes; ++t) {
        chain.sweep();
        if (t % snapshot_every == 0) snapshots.push_back(eigvals_tridiagonal(chain.coefficients()));
    }
    return snapshots;
}

}  // namespace betaforge
