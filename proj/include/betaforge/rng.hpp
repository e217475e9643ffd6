#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "betaforge/errors.hpp"

namespace betaforge {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace detail

/// xoshiro256++ with hash-derived state, so that distinct (seed, stream_id)
/// pairs give statistically independent streams and the same pair replays the
/// same sequence on any platform.  All distribution code below uses only
/// integer arithmetic plus libm, never std::<distribution>, to keep output
/// bit-reproducible across standard libraries.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed), stream_id_(stream_id) {
        std::uint64_t mix = seed + 0x9E3779B97F4A7C15ULL * (stream_id + 1);
        mix ^= stream_id * 0xBF58476D1CE4E5B9ULL;
        for (auto& word : s_) word = detail::splitmix64(mix);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = detail::rotl(s_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0, 1).
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal by the Marsaglia polar method.
    double normal() {
        for (;;) {
            const double u = 2.0 * uniform01() - 1.0;
            const double v = 2.0 * uniform01() - 1.0;
            const double r2 = u * u + v * v;
            if (r2 > 0.0 && r2 < 1.0) return u * std::sqrt(-2.0 * std::log(r2) / r2);
        }
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    /// Gamma(shape, scale) via Marsaglia-Tsang squeeze rejection for
    /// shape >= 1, boosted by the power-of-uniform identity below 1.
    double gamma(double shape, double scale) {
        if (!(shape > 0.0) || !(scale > 0.0))
            throw Error("RngStream::gamma: shape and scale must be > 0");
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0, 1.0);
            const double u = uniform01();
            return scale * g * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform01();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return scale * d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return scale * d * v;
        }
    }

    /// Beta(p, q) as X / (X + Y) with independent gammas.
    double beta(double p, double q) {
        const double x = gamma(p, 1.0);
        const double y = gamma(q, 1.0);
        return x / (x + y);
    }

    /// Symmetric Dirichlet(alpha, ..., alpha) on the N-simplex.
    std::vector<double> dirichlet(double alpha, std::size_t n) {
        std::vector<double> w(n);
        double sum = 0.0;
        for (double& wi : w) {
            wi = gamma(alpha, 1.0);
            sum += wi;
        }
        for (double& wi : w) wi /= sum;
        return w;
    }

private:
    std::uint64_t s_[4];
    std::uint64_t seed_;
    std::uint64_t stream_id_;
};

inline double sample_gamma(double shape, double scale, RngStream& rng) {
    return rng.gamma(shape, scale);
}

inline double sample_beta(double p, double q, RngStream& rng) { return rng.beta(p, q); }

inline std::vector<double> sample_dirichlet(double alpha, std::size_t n, RngStream& rng) {
    return rng.dirichlet(alpha, n);
}

}  // namespace betaforge
