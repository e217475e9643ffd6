#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "betaforge/errors.hpp"
#include "betaforge/jacobi.hpp"

namespace betaforge {

/// A probability measure with N distinct atoms.  Atoms are kept in the
/// canonical strictly decreasing order x_1 > ... > x_N; weights are positive
/// and sum to one.
class AtomicMeasure {
public:
    AtomicMeasure(std::vector<double> atoms, std::vector<double> weights) {
        if (atoms.empty() || atoms.size() != weights.size())
            throw LengthMismatch("AtomicMeasure: need equally many atoms and weights, N >= 1");
        detail::require_finite(atoms, "AtomicMeasure atoms");
        detail::require_finite(weights, "AtomicMeasure weights");

        std::vector<std::size_t> order(atoms.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t i, std::size_t j) { return atoms[i] > atoms[j]; });

        atoms_.reserve(atoms.size());
        weights_.reserve(atoms.size());
        double sum = 0.0;
        for (std::size_t k : order) {
            if (!atoms_.empty() && !(atoms[k] < atoms_.back()))
                throw DuplicateAtoms("AtomicMeasure: atoms must be distinct");
            if (!(weights[k] > 0.0))
                throw InvalidWeights("AtomicMeasure: weights must be > 0");
            atoms_.push_back(atoms[k]);
            weights_.push_back(weights[k]);
            sum += weights[k];
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw InvalidWeights("AtomicMeasure: weights must sum to 1 within 1e-12");
    }

    std::size_t size() const { return atoms_.size(); }
    const std::vector<double>& atoms() const { return atoms_; }
    const std::vector<double>& weights() const { return weights_; }

private:
    std::vector<double> atoms_;    // strictly decreasing
    std::vector<double> weights_;  // positive, sum to 1
};

/// Raw moments m_1..m_K (m_0 = 1 implicit).
struct MomentVector {
    std::vector<double> m;

    double moment(std::size_t k) const { return k == 0 ? 1.0 : m[k - 1]; }
    std::size_t count() const { return m.size(); }
};

/// m_k = sum_n w_n x_n^k for k = 1..kmax.
inline MomentVector moments_from_atoms(const AtomicMeasure& mu, std::size_t kmax) {
    MomentVector out;
    out.m.assign(kmax, 0.0);
    std::vector<double> pw(mu.size(), 1.0);
    for (std::size_t k = 0; k < kmax; ++k) {
        double s = 0.0;
        for (std::size_t n = 0; n < mu.size(); ++n) {
            pw[n] *= mu.atoms()[n];
            s += mu.weights()[n] * pw[n];
        }
        out.m[k] = s;
    }
    return out;
}

}  // namespace betaforge
