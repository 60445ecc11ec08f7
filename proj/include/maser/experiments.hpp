#pragma once

#include <cstdint>
#include <vector>

#include "maser/params.hpp"

namespace maser {

struct FisherSweepRow {
    double phi = 0.0;
    double i1 = 0.0, i2 = 0.0, i_star = 0.0, i_full = 0.0;
};

// Asymptotic informations per unit time over a phi grid.
std::vector<FisherSweepRow> fisher_sweep(double n_ex, double nu,
                                         const std::vector<double>& phi_grid,
                                         int n_max = 0, unsigned threads = 0);

struct ObservedSweepRow {
    double phi = 0.0;
    double i_star = 0.0;
    double i_full = 0.0;
    double ihat_mean = 0.0; // observed information of the atom record / T
    double ihat_se = 0.0;   // Monte Carlo standard error of the mean
    int n_seeds = 0;
};

// Monte Carlo comparison of the atom-record observed information against
// the total-counts optimum: per grid point, simulate n_seeds records of the
// given horizon, run the MLE on each and average the observed information
// per unit time.
std::vector<ObservedSweepRow> observed_info_sweep(
    double n_ex, double nu, const std::vector<double>& phi_grid, double horizon,
    int n_seeds, std::uint64_t seed_base, int mle_grid_points = 48,
    int n_max = 0, unsigned threads = 0);

std::vector<double> linspace(double lo, double hi, int n);

} // namespace maser
