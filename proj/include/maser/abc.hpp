#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maser/record.hpp"
#include "maser/stats.hpp"

namespace maser {

// Statistic subsets are bitmasks over StatisticId; bit a set means
// statistic a participates in the intersection.
using StatSubset = std::uint8_t;
inline constexpr StatSubset kAllStatistics = 0x7f;

std::string subset_name(StatSubset subset);            // "wait1-total1" etc.
StatSubset subset_from_names(const std::string& csv);  // "wait1,total1"

struct AbcConfig {
    std::pair<double, double> prior_range{0.1, 1.5};
    std::size_t n_sims = 20000;
    double quantile = 0.05;
    double horizon = 500.0;
    double window_s = 1.0;
    std::uint64_t seed_base = 0;
    double n_ex = 16.0;
    double nu = 0.1;
    int n_max = 0; // 0: default_n_max(n_ex)
    double tail_tol = 1e-10;
    std::vector<StatSubset> subsets{kAllStatistics}; // combinations to build
    int histogram_bins = 70;
    unsigned threads = 0;

    void validate() const;
};

struct TrialRow {
    double phi = 0.0;
    std::array<double, 7> d{};
    std::uint64_t seed = 0;
};

struct Histogram {
    double lo = 0.0, hi = 0.0;
    std::vector<double> mass; // normalized to sum 1 when nonempty

    double bin_width() const { return (hi - lo) / static_cast<double>(mass.size()); }
    double center(std::size_t i) const { return lo + (static_cast<double>(i) + 0.5) * bin_width(); }
    double mean() const;
    double stddev() const;
};

Histogram histogram_from_samples(std::span<const double> xs, double lo, double hi,
                                 int bins);

struct RelaxationStep {
    double quantile = 0.0;
    std::size_t accepted = 0;
};

struct AbcPosterior {
    std::vector<TrialRow> trials;
    // Accepted trial indices (sorted ascending) per single statistic.
    std::array<std::vector<std::uint32_t>, 7> accepted_single;
    // Accepted indices per requested subset (intersections of the singles).
    std::map<StatSubset, std::vector<std::uint32_t>> accepted;
    std::map<StatSubset, Histogram> histograms;
    // Subsets whose intersection was empty at the configured quantile, with
    // the doubling schedule that produced the emitted relaxed result.
    std::map<StatSubset, std::vector<RelaxationStep>> relaxations;
    std::size_t per_statistic_count = 0; // ceil(quantile * n_sims)
    std::size_t resampled_trials = 0;    // discarded for truncation, redrawn
};

// Rejection ABC over phi: n_sims trials with phi drawn uniformly from the
// prior range (an independent stream, so the trial set does not depend on
// the statistic subsets), one simulated record per trial at the data's
// horizon, the 7 distances to the data statistics, then per-statistic
// quantile acceptance and subset intersections. Deterministic given
// (data, config), whatever the worker count.
AbcPosterior run_abc(const DetectionRecord& data, const AbcConfig& config);

struct LikelihoodPosterior {
    std::vector<double> grid;
    std::vector<double> log_lik;
    std::vector<double> posterior; // exp(ll - max) normalized over the grid
};

// Filter log-likelihood per grid point, normalized under a flat prior.
LikelihoodPosterior likelihood_posterior(const DetectionRecord& data,
                                         std::span<const double> grid,
                                         double n_ex, double nu, int n_max = 0,
                                         double tail_tol = 1e-10,
                                         unsigned threads = 0);

// Normalization seam shared with tests: posterior from precomputed values.
LikelihoodPosterior posterior_from_logliks(std::vector<double> grid,
                                           std::vector<double> log_lik);

struct PosteriorComparison {
    double tv = 0.0;          // total variation on the reference grid cells
    double mean_diff = 0.0;   // abc mean - reference mean
    double std_diff = 0.0;    // abc std - reference std
    double mode_offset = 0.0; // abc mode - reference mode
    bool disjoint = false;
};

// Rebins the ABC histogram onto the reference grid cells and compares.
PosteriorComparison compare_posteriors(const Histogram& abc,
                                       const LikelihoodPosterior& ref);

// Exact Bayesian computation on a discrete toy model: accept a prior draw
// when the simulated dataset equals the observed one. Exposed for the
// discrete-toy tests; real records make equality a null event.
template <class Theta, class Data, class PriorFn, class SimFn>
std::vector<Theta> run_ebc(std::size_t n_trials, PriorFn&& prior, SimFn&& simulate,
                           const Data& observed) {
    std::vector<Theta> accepted;
    for (std::size_t i = 0; i < n_trials; ++i) {
        Theta theta = prior(i);
        if (simulate(theta, i) == observed) accepted.push_back(theta);
    }
    return accepted;
}

} // namespace maser
