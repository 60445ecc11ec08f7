#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "maser/generators.hpp"
#include "maser/params.hpp"
#include "maser/record.hpp"

namespace maser {

// The seven per-record summary statistics. Waiting times are gaps between
// consecutive same-label detections (other labels may fall in between);
// run means average the maximal runs of identical consecutive labels,
// including runs cut off by the record boundary; each excited detection at
// time t contributes the count of ground detections in (t - s, t) divided
// by s (windows reaching before t = 0 are clipped, the divisor stays s).
struct SummaryStatistics {
    std::size_t total_1 = 0;
    std::size_t total_2 = 0;
    std::vector<double> wait_1, wait_2;     // sorted ascending
    double runmean_1 = 0.0, runmean_2 = 0.0; // 0 when no events of the label
    std::vector<double> local_density;      // sorted ascending
    double window_s = 0.0;
    std::size_t truncated_windows = 0;      // windows clipped at t = 0
};

SummaryStatistics extract(const DetectionRecord& rec, double window_s);

// Two-sided two-sample Kolmogorov-Smirnov statistic sup|F_n - G_m| over the
// merged support; O(n+m) on sorted inputs. Throws EmptySampleError.
double ks_two_sample(std::span<const double> x_sorted,
                     std::span<const double> y_sorted);

// Index order of the distance vector and of statistic subsets everywhere.
enum StatisticId : int {
    kTotal1 = 0,
    kTotal2 = 1,
    kWait1 = 2,
    kWait2 = 3,
    kRunMean1 = 4,
    kRunMean2 = 5,
    kLocalDensity = 6,
};
inline constexpr int kNumStatistics = 7;

const char* statistic_name(int id);        // "total1", ..., "locden"
int statistic_from_name(const std::string& name); // throws ConfigError

struct DistanceVector {
    std::array<double, 7> d{};
    // Bit a set: the KS slot for statistic a had an empty sample and was
    // assigned the maximal distance 1.
    std::uint8_t empty_flags = 0;
};

// Totals: absolute difference. Run means: |1 - sim/exp|. Waiting times and
// local density: two-sample KS.
DistanceVector distances(const SummaryStatistics& sim, const SummaryStatistics& exp);

struct WaitingDensity {
    std::vector<double> t;   // the input grid
    std::vector<double> pdf; // waiting-time density p_i(t)
    std::vector<double> cdf; // integral of pdf from 0, adaptive Simpson
};

// Waiting-time density of channel a (1 or 2) from the stationary regime:
// p_a(t) = tr(J_a e^{(L-J_a) t} rho_after), rho_after = J_a rho_ss
// normalized. The CDF is accumulated by adaptive quadrature between grid
// points.
WaitingDensity theoretical_waiting_density(const ModelParams& p, Channel a,
                                           std::span<const double> t_grid);

// Exact CDF at the given sorted times via the survival form
// 1 - tr(e^{(L-J_a) t} rho_after); used for KS tests against samples.
std::vector<double> waiting_cdf_at(const ModelParams& p, Channel a,
                                   std::span<const double> sorted_times);

// P(next detection is channel b | a detection just happened), stationary.
double next_click_prob(const ModelParams& p, Channel b, Channel a);

// Mean run length of channel a: 1 / p(other | a).
double theoretical_runmean(const ModelParams& p, Channel a);

} // namespace maser
