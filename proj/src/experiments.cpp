#include "maser/experiments.hpp"

#include <cmath>

#include "maser/errors.hpp"
#include "maser/fisher.hpp"
#include "maser/mle.hpp"
#include "maser/parallel.hpp"
#include "maser/rng.hpp"
#include "maser/simulate.hpp"

namespace maser {

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw DomainError("linspace: need at least one point");
    std::vector<double> v(static_cast<std::size_t>(n));
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    const double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + step * i;
    return v;
}

std::vector<FisherSweepRow> fisher_sweep(double n_ex, double nu,
                                         const std::vector<double>& phi_grid,
                                         int n_max, unsigned threads) {
    std::vector<FisherSweepRow> rows(phi_grid.size());
    parallel_for(
        phi_grid.size(),
        [&](std::size_t i) {
            ModelParams p;
            p.phi = phi_grid[i];
            p.n_ex = n_ex;
            p.nu = nu;
            p.n_max = n_max > 0 ? n_max : default_n_max(n_ex);
            const CountsGaussianLimit lim = gaussian_limit(p);
            const FisherCounts fc = fisher_counts(lim);
            rows[i] = {p.phi, fc.i1, fc.i2, fc.i_star, fisher_full_monitoring(p)};
        },
        threads);
    return rows;
}

std::vector<ObservedSweepRow> observed_info_sweep(
    double n_ex, double nu, const std::vector<double>& phi_grid, double horizon,
    int n_seeds, std::uint64_t seed_base, int mle_grid_points, int n_max,
    unsigned threads) {
    if (n_seeds < 2) throw DomainError("observed_info_sweep: need at least 2 seeds");
    const std::vector<FisherSweepRow> theory =
        fisher_sweep(n_ex, nu, phi_grid, n_max, threads);

    std::vector<ObservedSweepRow> rows(phi_grid.size());
    // Parallelize over (grid point, seed) pairs; every record is
    // independent work of similar size.
    std::vector<double> ihat(phi_grid.size() * static_cast<std::size_t>(n_seeds));
    parallel_for(
        ihat.size(),
        [&](std::size_t k) {
            const std::size_t gi = k / static_cast<std::size_t>(n_seeds);
            const std::size_t si = k % static_cast<std::size_t>(n_seeds);
            ModelParams p;
            p.phi = phi_grid[gi];
            p.n_ex = n_ex;
            p.nu = nu;
            p.n_max = n_max > 0 ? n_max : default_n_max(n_ex);
            const FullRecord full =
                simulate(p, horizon, derive_seed(seed_base, gi, si));
            MleOptions opts;
            opts.grid_points = mle_grid_points;
            opts.n_max = p.n_max;
            const MleResult res =
                mle(atoms_only(full), n_ex, nu, {0.1, 1.5}, opts);
            ihat[k] = res.observed_fisher / horizon;
        },
        threads);

    for (std::size_t gi = 0; gi < phi_grid.size(); ++gi) {
        double mean = 0.0;
        for (int s = 0; s < n_seeds; ++s)
            mean += ihat[gi * static_cast<std::size_t>(n_seeds) +
                         static_cast<std::size_t>(s)];
        mean /= n_seeds;
        double var = 0.0;
        for (int s = 0; s < n_seeds; ++s) {
            const double d = ihat[gi * static_cast<std::size_t>(n_seeds) +
                                  static_cast<std::size_t>(s)] -
                             mean;
            var += d * d;
        }
        var /= (n_seeds - 1);
        rows[gi] = {phi_grid[gi],      theory[gi].i_star,
                    theory[gi].i_full, mean,
                    std::sqrt(var / n_seeds), n_seeds};
    }
    return rows;
}

} // namespace maser
