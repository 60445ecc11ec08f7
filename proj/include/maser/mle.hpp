#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "maser/record.hpp"

namespace maser {

struct MleOptions {
    int grid_points = 141;      // coarse scan before refinement
    double refine_tol = 1e-5;   // golden-section width on phi
    double fisher_step = 1e-3;  // base step for the observed-information FD
    int n_max = 0;              // 0: default_n_max(n_ex)
    double tail_tol = 1e-10;
    unsigned threads = 1;       // grid evaluations parallelize
};

struct MleResult {
    double phi_hat = 0.0;
    double log_lik_at_hat = 0.0;
    double observed_fisher = 0.0; // per record; divide by horizon for the rate
    std::vector<std::pair<double, double>> grid_profile; // (phi, loglik)
    int iterations = 0;          // golden-section iterations
    bool boundary = false;       // maximizer pinned to a search endpoint
    bool curvature_ok = true;    // observed information positive and stable
    double fisher_rel_step_diff = 0.0; // FD agreement between h and h/2
};

// Maximum-likelihood estimate of phi from a detection record with n_ex and
// nu known: grid scan over [search.first, search.second] followed by
// golden-section refinement around the best grid point.
MleResult mle(const DetectionRecord& rec, double n_ex, double nu,
              std::pair<double, double> search, const MleOptions& opts = {});

// Observed Fisher information of an arbitrary log-likelihood curve:
// -d^2/dphi^2 by central differences at h and h/2 with a Richardson
// extrapolation; *rel_diff reports the agreement between the two steps.
double observed_fisher_of(const std::function<double(double)>& loglik,
                          double phi_hat, double h = 1e-3,
                          double* rel_diff = nullptr);

// Observed Fisher information of a record's filter likelihood at phi_hat.
double observed_fisher(const DetectionRecord& rec, double phi_hat, double n_ex,
                       double nu, const MleOptions& opts = {});

} // namespace maser
