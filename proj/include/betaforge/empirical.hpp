#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "betaforge/errors.hpp"

namespace betaforge {

/// Empirical distribution of a sample, F(x) = #{samples <= x} / n.
class EmpiricalCDF {
public:
    explicit EmpiricalCDF(std::vector<double> samples) : sorted_(std::move(samples)) {
        if (sorted_.empty()) throw LengthMismatch("EmpiricalCDF: need at least one sample");
        std::sort(sorted_.begin(), sorted_.end());
    }

    double operator()(double x) const {
        const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
        return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
    }

    std::size_t size() const { return sorted_.size(); }
    const std::vector<double>& sorted_samples() const { return sorted_; }

private:
    std::vector<double> sorted_;
};

/// Exact Kolmogorov-Smirnov statistic sup_x |F_hat(x) - F(x)|, evaluated at
/// the jump points from both sides.
inline double ks_distance(const EmpiricalCDF& samples,
                          const std::function<double(double)>& target_cdf) {
    const auto& xs = samples.sorted_samples();
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = target_cdf(xs[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_two_sample(const EmpiricalCDF& a, const EmpiricalCDF& b) {
    const auto& xa = a.sorted_samples();
    const auto& xb = b.sorted_samples();
    double d = 0.0;
    std::size_t i = 0, k = 0;
    while (i < xa.size() && k < xb.size()) {
        const double x = std::min(xa[i], xb[k]);
        while (i < xa.size() && xa[i] <= x) ++i;
        while (k < xb.size() && xb[k] <= x) ++k;
        d = std::max(d, std::abs(static_cast<double>(i) / static_cast<double>(xa.size()) -
                                 static_cast<double>(k) / static_cast<double>(xb.size())));
    }
    return d;
}

}  // namespace betaforge
