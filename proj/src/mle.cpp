#include "maser/mle.hpp"

#include <algorithm>
#include <cmath>

#include "maser/errors.hpp"
#include "maser/filter.hpp"
#include "maser/parallel.hpp"

namespace maser {

namespace {

ModelParams params_at(double phi, double n_ex, double nu, const MleOptions& opts) {
    ModelParams p;
    p.phi = phi;
    p.n_ex = n_ex;
    p.nu = nu;
    p.n_max = opts.n_max > 0 ? opts.n_max : default_n_max(n_ex);
    p.tail_tol = opts.tail_tol;
    return p;
}

// Golden-section maximization on [lo, hi]; assumes a bracket.
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double tol, int* iterations) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    int it = 0;
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
        ++it;
    }
    if (iterations) *iterations = it;
    return 0.5 * (a + b);
}

} // namespace

double observed_fisher_of(const std::function<double(double)>& loglik,
                          double phi_hat, double h, double* rel_diff) {
    auto second_diff = [&](double step) {
        const double c = loglik(phi_hat);
        const double p = loglik(phi_hat + step);
        const double m = loglik(phi_hat - step);
        return -(p - 2.0 * c + m) / (step * step);
    };
    const double coarse = second_diff(h);
    const double fine = second_diff(0.5 * h);
    // Richardson extrapolation of the O(h^2) central formula.
    const double extrap = (4.0 * fine - coarse) / 3.0;
    if (rel_diff) {
        const double scale = std::max(std::abs(fine), 1e-300);
        *rel_diff = std::abs(fine - coarse) / scale;
    }
    return extrap;
}

double observed_fisher(const DetectionRecord& rec, double phi_hat, double n_ex,
                       double nu, const MleOptions& opts) {
    auto ll = [&](double phi) {
        return log_likelihood(rec, params_at(phi, n_ex, nu, opts));
    };
    return observed_fisher_of(ll, phi_hat, opts.fisher_step, nullptr);
}

MleResult mle(const DetectionRecord& rec, double n_ex, double nu,
              std::pair<double, double> search, const MleOptions& opts) {
    rec.validate();
    const double lo = search.first, hi = search.second;
    if (!(lo > 0.0) || hi < lo)
        throw DomainError("mle: search interval must satisfy 0 < lo <= hi");

    auto ll = [&](double phi) {
        return log_likelihood(rec, params_at(phi, n_ex, nu, opts));
    };

    MleResult res;

    if (hi == lo) {
        res.phi_hat = lo;
        res.log_lik_at_hat = ll(lo);
        res.grid_profile = {{lo, res.log_lik_at_hat}};
    } else {
        const int g = std::max(2, opts.grid_points);
        res.grid_profile.resize(g);
        const double step = (hi - lo) / (g - 1);
        parallel_for(
            static_cast<std::size_t>(g),
            [&](std::size_t i) {
                const double phi = lo + step * static_cast<double>(i);
                res.grid_profile[i] = {phi, ll(phi)};
            },
            opts.threads);

        std::size_t best = 0;
        for (std::size_t i = 1; i < res.grid_profile.size(); ++i)
            if (res.grid_profile[i].second > res.grid_profile[best].second) best = i;

        const double bracket_lo = best == 0 ? lo : res.grid_profile[best - 1].first;
        const double bracket_hi =
            best + 1 == res.grid_profile.size() ? hi : res.grid_profile[best + 1].first;
        res.phi_hat = golden_max(ll, bracket_lo, bracket_hi, opts.refine_tol,
                                 &res.iterations);
        res.log_lik_at_hat = ll(res.phi_hat);

        // The refined point can only improve on the grid; keep the better one.
        if (res.grid_profile[best].second > res.log_lik_at_hat) {
            res.phi_hat = res.grid_profile[best].first;
            res.log_lik_at_hat = res.grid_profile[best].second;
        }
        res.boundary = (res.phi_hat - lo) < 2.0 * opts.refine_tol ||
                       (hi - res.phi_hat) < 2.0 * opts.refine_tol;
    }

    res.observed_fisher =
        observed_fisher_of(ll, res.phi_hat, opts.fisher_step, &res.fisher_rel_step_diff);
    res.curvature_ok = res.observed_fisher >= 0.0 && res.fisher_rel_step_diff < 0.05;
    return res;
}

} // namespace maser
