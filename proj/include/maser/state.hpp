#pragma once

#include <numeric>
#include <span>
#include <vector>

#include "maser/errors.hpp"

namespace maser {

// Probability vector over truncated Fock levels 0..n_max; entry n is the
// probability of photon number n.
struct DiagonalState {
    std::vector<double> probs;

    DiagonalState() = default;
    explicit DiagonalState(std::vector<double> p) : probs(std::move(p)) {}

    std::size_t size() const { return probs.size(); }

    double sum() const {
        return std::accumulate(probs.begin(), probs.end(), 0.0);
    }

    double mean_photon() const {
        double m = 0.0;
        for (std::size_t n = 0; n < probs.size(); ++n)
            m += static_cast<double>(n) * probs[n];
        return m;
    }

    // Roundoff policy: negative dust below the slack is clamped to zero and
    // the vector renormalized; anything larger is a bug, not roundoff.
    void clamp_and_renormalize(double slack = 1e-12) {
        double neg = 0.0;
        for (double& p : probs) {
            if (p < 0.0) {
                neg -= p;
                p = 0.0;
            }
        }
        if (neg > slack)
            throw DomainError("DiagonalState: negative mass beyond roundoff slack");
        const double s = sum();
        if (s <= 0.0) throw DomainError("DiagonalState: zero total mass");
        for (double& p : probs) p /= s;
    }
};

inline double vector_sum(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

} // namespace maser
