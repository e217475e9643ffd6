#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "betaforge/errors.hpp"
#include "betaforge/jacobi.hpp"
#include "betaforge/rng.hpp"
#include "betaforge/spectral.hpp"

namespace betaforge {

struct HermiteEnsemble {
    double mu = 0.0;
    double sigma = 1.0;
};

struct LaguerreEnsemble {
    double k = 1.0;
    double theta = 2.0;
};

// The potential parameters usually written (a, b); renamed to avoid clashing
// with the matrix entries.
struct JacobiEnsemble {
    double p = 1.0;
    double q = 1.0;
};

using EnsembleKind = std::variant<HermiteEnsemble, LaguerreEnsemble, JacobiEnsemble>;

struct EnsembleSpec {
    EnsembleSpec(EnsembleKind kind_, std::size_t n_, double beta_)
        : kind(kind_), n(n_), beta(beta_) {
        if (n < 1) throw ConfigError("EnsembleSpec: N must be >= 1");
        if (!(beta > 0.0)) throw ConfigError("EnsembleSpec: beta must be > 0");
        if (const auto* h = std::get_if<HermiteEnsemble>(&kind)) {
            if (!(h->sigma > 0.0)) throw ConfigError("EnsembleSpec: sigma must be > 0");
        } else if (const auto* l = std::get_if<LaguerreEnsemble>(&kind)) {
            if (!(l->k > 0.0) || !(l->theta > 0.0))
                throw ConfigError("EnsembleSpec: k and theta must be > 0");
        } else if (const auto* j = std::get_if<JacobiEnsemble>(&kind)) {
            if (!(j->p > 0.0) || !(j->q > 0.0))
                throw ConfigError("EnsembleSpec: p and q must be > 0");
        }
    }

    EnsembleKind kind;
    std::size_t n;
    double beta;
};

/// One draw of the independent tridiagonal-model coefficients of the
/// requested ensemble.  Hermite fills (a, b) directly; Laguerre draws the
/// Cholesky parameters and maps through xi_to_ab; Jacobi draws canonical
/// moments and maps through c_to_xi and xi_to_ab.
inline JacobiCoefficients sample_coefficients(const EnsembleSpec& spec, RngStream& rng) {
    const std::size_t n = spec.n;
    const double half_beta = 0.5 * spec.beta;

    if (const auto* h = std::get_if<HermiteEnsemble>(&spec.kind)) {
        std::vector<double> a(n), b(n > 0 ? n - 1 : 0);
        for (std::size_t i = 0; i < n; ++i) a[i] = rng.normal(h->mu, h->sigma);
        for (std::size_t i = 0; i + 1 < n; ++i)
            b[i] = rng.gamma(half_beta * static_cast<double>(n - 1 - i), h->sigma * h->sigma);
        return JacobiCoefficients(std::move(a), std::move(b));
    }
    if (const auto* l = std::get_if<LaguerreEnsemble>(&spec.kind)) {
        std::vector<double> xi(2 * n - 1);
        for (std::size_t i = 0; i < 2 * n - 1; ++i) {
            // xi_{2m-1} has shape beta/2 (N - m) + k, xi_{2m} has shape beta/2 (N - m)
            const std::size_t m = i / 2 + 1;
            const double shape = i % 2 == 0
                                     ? half_beta * static_cast<double>(n - m) + l->k
                                     : half_beta * static_cast<double>(n - m);
            xi[i] = rng.gamma(shape, l->theta);
        }
        return xi_to_ab(XiParams(std::move(xi)));
    }
    const auto& j = std::get<JacobiEnsemble>(spec.kind);
    std::vector<double> c(2 * n - 1);
    for (std::size_t i = 0; i < 2 * n - 1; ++i) {
        const std::size_t m = i / 2 + 1;
        const double nm = half_beta * static_cast<double>(n - m);
        if (i % 2 == 0) {
            c[i] = rng.beta(nm + j.p, nm + j.q);
        } else {
            c[i] = rng.beta(nm, half_beta * static_cast<double>(n - m - 1) + j.p + j.q);
        }
    }
    return xi_to_ab(c_to_xi(CanonicalMoments(std::move(c))));
}

/// An exact draw from the ensemble's joint eigenvalue density.
inline SpectralSample sample_ensemble(const EnsembleSpec& spec, RngStream& rng) {
    return eigvals_tridiagonal(sample_coefficients(spec, rng));
}

}  // namespace betaforge
