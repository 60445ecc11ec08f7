#include "maser/abc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "maser/errors.hpp"
#include "maser/filter.hpp"
#include "maser/parallel.hpp"
#include "maser/rng.hpp"
#include "maser/simulate.hpp"

namespace maser {

std::string subset_name(StatSubset subset) {
    std::string out;
    for (int id = 0; id < kNumStatistics; ++id) {
        if (subset & (1u << id)) {
            if (!out.empty()) out += '-';
            out += statistic_name(id);
        }
    }
    return out.empty() ? "none" : out;
}

StatSubset subset_from_names(const std::string& csv) {
    StatSubset subset = 0;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const std::size_t comma = csv.find(',', start);
        const std::string token =
            csv.substr(start, comma == std::string::npos ? std::string::npos
                                                         : comma - start);
        if (!token.empty())
            subset |= static_cast<StatSubset>(1u << statistic_from_name(token));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (subset == 0) throw ConfigError("empty statistic subset");
    return subset;
}

void AbcConfig::validate() const {
    if (!(prior_range.first > 0.0) || !(prior_range.second > prior_range.first))
        throw ConfigError("abc: prior range must satisfy 0 < lo < hi");
    if (!(quantile > 0.0) || !(quantile < 1.0))
        throw ConfigError("abc: quantile must lie in (0, 1)");
    if (n_sims < 100) throw ConfigError("abc: n_sims must be at least 100");
    if (!(horizon > 0.0)) throw ConfigError("abc: horizon must be positive");
    if (!(window_s > 0.0)) throw ConfigError("abc: window_s must be positive");
    if (histogram_bins < 2) throw ConfigError("abc: need at least 2 bins");
}

double Histogram::mean() const {
    double m = 0.0, w = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
        m += mass[i] * center(i);
        w += mass[i];
    }
    return w > 0.0 ? m / w : 0.0;
}

double Histogram::stddev() const {
    const double m = mean();
    double v = 0.0, w = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
        const double d = center(i) - m;
        v += mass[i] * d * d;
        w += mass[i];
    }
    return w > 0.0 ? std::sqrt(v / w) : 0.0;
}

Histogram histogram_from_samples(std::span<const double> xs, double lo, double hi,
                                 int bins) {
    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.mass.assign(static_cast<std::size_t>(bins), 0.0);
    if (xs.empty()) return h;
    const double width = (hi - lo) / bins;
    for (double x : xs) {
        auto i = static_cast<long>(std::floor((x - lo) / width));
        i = std::clamp<long>(i, 0, bins - 1);
        h.mass[static_cast<std::size_t>(i)] += 1.0;
    }
    const double total = static_cast<double>(xs.size());
    for (double& m : h.mass) m /= total;
    return h;
}

namespace {

// Indices of the m smallest distances for one statistic, ties broken by
// trial index; returned sorted ascending by index.
std::vector<std::uint32_t> accept_smallest(const std::vector<TrialRow>& trials,
                                           int stat, std::size_t m) {
    std::vector<std::uint32_t> order(trials.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                         return trials[a].d[stat] < trials[b].d[stat];
                     });
    order.resize(std::min(m, order.size()));
    std::sort(order.begin(), order.end());
    return order;
}

std::vector<std::uint32_t> intersect_subset(
    const std::array<std::vector<std::uint32_t>, 7>& singles, StatSubset subset) {
    std::vector<std::uint32_t> acc;
    bool first = true;
    for (int id = 0; id < kNumStatistics; ++id) {
        if (!(subset & (1u << id))) continue;
        if (first) {
            acc = singles[id];
            first = false;
        } else {
            std::vector<std::uint32_t> merged;
            std::set_intersection(acc.begin(), acc.end(), singles[id].begin(),
                                  singles[id].end(), std::back_inserter(merged));
            acc.swap(merged);
        }
    }
    return acc;
}

Histogram histogram_of_indices(const std::vector<TrialRow>& trials,
                               const std::vector<std::uint32_t>& idx,
                               const AbcConfig& cfg) {
    std::vector<double> phis;
    phis.reserve(idx.size());
    for (std::uint32_t i : idx) phis.push_back(trials[i].phi);
    return histogram_from_samples(phis, cfg.prior_range.first,
                                  cfg.prior_range.second, cfg.histogram_bins);
}

} // namespace

AbcPosterior run_abc(const DetectionRecord& data, const AbcConfig& config) {
    config.validate();
    data.validate();

    const SummaryStatistics data_stats = extract(data, config.window_s);

    // phi draws come from their own stream so the trial set is a pure
    // function of (seed_base, n_sims).
    std::vector<double> phis(config.n_sims);
    {
        Rng phi_rng(derive_seed(config.seed_base, 0x70686921ULL));
        const double lo = config.prior_range.first;
        const double span = config.prior_range.second - lo;
        for (double& phi : phis) phi = lo + span * phi_rng.uniform();
    }

    ModelParams base;
    base.phi = 1.0;
    base.n_ex = config.n_ex;
    base.nu = config.nu;
    base.n_max = config.n_max > 0 ? config.n_max : default_n_max(config.n_ex);
    base.tail_tol = config.tail_tol;

    AbcPosterior post;
    post.trials.resize(config.n_sims);
    std::vector<std::uint8_t> resampled(config.n_sims, 0);

    parallel_for(
        config.n_sims,
        [&](std::size_t i) {
            ModelParams p = base;
            p.phi = phis[i];
            // Synthetic records carry no parameter metadata: the distance
            // stage must never see the trial phi.
            SimulateOptions opts;
            opts.attach_meta = false;
            std::uint64_t seed = derive_seed(config.seed_base, 1, i);
            for (std::uint64_t retry = 0;; ++retry) {
                try {
                    const FullRecord full = simulate(p, config.horizon, seed, opts);
                    const SummaryStatistics st =
                        extract(atoms_only(full), config.window_s);
                    post.trials[i] = {p.phi, distances(st, data_stats).d, seed};
                    break;
                } catch (const TruncationError&) {
                    if (retry >= 16)
                        throw TruncationError(
                            "abc: trial keeps hitting the truncation boundary");
                    resampled[i] = 1;
                    seed = derive_seed(config.seed_base, 2 + retry, i);
                }
            }
        },
        config.threads);
    post.resampled_trials =
        static_cast<std::size_t>(std::count(resampled.begin(), resampled.end(), 1));

    const auto m = static_cast<std::size_t>(
        std::ceil(config.quantile * static_cast<double>(config.n_sims)));
    post.per_statistic_count = m;
    for (int id = 0; id < kNumStatistics; ++id)
        post.accepted_single[id] = accept_smallest(post.trials, id, m);

    // Requested subsets plus all singletons.
    std::vector<StatSubset> wanted;
    for (int id = 0; id < kNumStatistics; ++id)
        wanted.push_back(static_cast<StatSubset>(1u << id));
    for (StatSubset s : config.subsets)
        if (std::find(wanted.begin(), wanted.end(), s) == wanted.end())
            wanted.push_back(s);

    for (StatSubset subset : wanted) {
        std::vector<std::uint32_t> idx = intersect_subset(post.accepted_single, subset);
        if (idx.empty()) {
            // Double the per-statistic quantile until the intersection fills.
            std::vector<RelaxationStep> log;
            double q = config.quantile;
            while (idx.empty() && q < 1.0) {
                q = std::min(1.0, 2.0 * q);
                const auto mq = static_cast<std::size_t>(
                    std::ceil(q * static_cast<double>(config.n_sims)));
                std::array<std::vector<std::uint32_t>, 7> relaxed;
                for (int id = 0; id < kNumStatistics; ++id)
                    if (subset & (1u << id))
                        relaxed[id] = accept_smallest(post.trials, id, mq);
                idx = intersect_subset(relaxed, subset);
                log.push_back({q, idx.size()});
            }
            post.relaxations[subset] = std::move(log);
        }
        post.histograms[subset] = histogram_of_indices(post.trials, idx, config);
        post.accepted[subset] = std::move(idx);
    }
    return post;
}

LikelihoodPosterior likelihood_posterior(const DetectionRecord& data,
                                         std::span<const double> grid,
                                         double n_ex, double nu, int n_max,
                                         double tail_tol, unsigned threads) {
    if (grid.empty()) throw DomainError("likelihood_posterior: empty grid");
    std::vector<double> ll(grid.size());
    parallel_for(
        grid.size(),
        [&](std::size_t i) {
            ModelParams p;
            p.phi = grid[i];
            p.n_ex = n_ex;
            p.nu = nu;
            p.n_max = n_max > 0 ? n_max : default_n_max(n_ex);
            p.tail_tol = tail_tol;
            ll[i] = log_likelihood(data, p);
        },
        threads);
    return posterior_from_logliks(std::vector<double>(grid.begin(), grid.end()),
                                  std::move(ll));
}

LikelihoodPosterior posterior_from_logliks(std::vector<double> grid,
                                           std::vector<double> log_lik) {
    if (grid.size() != log_lik.size() || grid.empty())
        throw DomainError("posterior_from_logliks: bad sizes");
    LikelihoodPosterior out;
    out.grid = std::move(grid);
    out.log_lik = std::move(log_lik);
    const double peak = *std::max_element(out.log_lik.begin(), out.log_lik.end());
    out.posterior.resize(out.grid.size());
    double z = 0.0;
    for (std::size_t i = 0; i < out.grid.size(); ++i) {
        out.posterior[i] = std::exp(out.log_lik[i] - peak);
        z += out.posterior[i];
    }
    for (double& p : out.posterior) p /= z;
    return out;
}

PosteriorComparison compare_posteriors(const Histogram& abc,
                                       const LikelihoodPosterior& ref) {
    PosteriorComparison out;
    const std::size_t g = ref.grid.size();
    if (g == 0) throw DomainError("compare_posteriors: empty reference");

    // Cell edges around each reference grid node (midpoints between nodes).
    std::vector<double> edges(g + 1);
    edges[0] = g == 1 ? ref.grid[0] - 0.5 : ref.grid[0] - 0.5 * (ref.grid[1] - ref.grid[0]);
    for (std::size_t i = 1; i < g; ++i)
        edges[i] = 0.5 * (ref.grid[i - 1] + ref.grid[i]);
    edges[g] = g == 1 ? ref.grid[0] + 0.5
                      : ref.grid[g - 1] + 0.5 * (ref.grid[g - 1] - ref.grid[g - 2]);

    // ABC mass per reference cell, treating the histogram as a piecewise
    // constant density.
    const double bw = abc.bin_width();
    std::vector<double> abc_mass(g, 0.0);
    double abc_in_range = 0.0;
    for (std::size_t b = 0; b < abc.mass.size(); ++b) {
        const double blo = abc.lo + static_cast<double>(b) * bw;
        const double bhi = blo + bw;
        for (std::size_t c = 0; c < g; ++c) {
            const double overlap =
                std::max(0.0, std::min(bhi, edges[c + 1]) - std::max(blo, edges[c]));
            if (overlap > 0.0) abc_mass[c] += abc.mass[b] * overlap / bw;
        }
    }
    for (double mcell : abc_mass) abc_in_range += mcell;

    double tv = 0.0, overlap_mass = 0.0;
    for (std::size_t c = 0; c < g; ++c) {
        tv += std::abs(abc_mass[c] - ref.posterior[c]);
        overlap_mass += std::min(abc_mass[c], ref.posterior[c]);
    }
    // Mass falling outside the reference cells counts fully toward TV.
    tv += 1.0 - abc_in_range;
    out.tv = 0.5 * tv;
    out.disjoint = overlap_mass <= 0.0;

    double ref_mean = 0.0;
    for (std::size_t c = 0; c < g; ++c) ref_mean += ref.grid[c] * ref.posterior[c];
    double ref_var = 0.0;
    for (std::size_t c = 0; c < g; ++c) {
        const double d = ref.grid[c] - ref_mean;
        ref_var += d * d * ref.posterior[c];
    }
    out.mean_diff = abc.mean() - ref_mean;
    out.std_diff = abc.stddev() - std::sqrt(ref_var);

    const std::size_t ref_mode = static_cast<std::size_t>(
        std::max_element(ref.posterior.begin(), ref.posterior.end()) -
        ref.posterior.begin());
    const std::size_t abc_mode = static_cast<std::size_t>(
        std::max_element(abc.mass.begin(), abc.mass.end()) - abc.mass.begin());
    out.mode_offset = abc.center(abc_mode) - ref.grid[ref_mode];
    return out;
}

} // namespace maser
