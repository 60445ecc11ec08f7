#include "maser/full_monitoring.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "maser/errors.hpp"
#include "maser/generators.hpp"
#include "maser/mle.hpp"

namespace maser {

namespace {

double total_outflow(const ModelParams& p, int k) {
    return birth_rate(p, k) + death_rate(p, k) + excited_intensity(p, k);
}

double event_rate(const ModelParams& p, int level, int label) {
    switch (label) {
        case 1: return birth_rate(p, level) * atom_fraction_of_birth(p, level);
        case 2: return excited_intensity(p, level);
        case 3: return death_rate(p, level);
        case 4: return p.nu * static_cast<double>(level + 1);
    }
    throw FormatError("full record: bad label");
}

} // namespace

double full_monitoring_log_likelihood(const FullRecord& rec, const ModelParams& p) {
    p.validate();
    rec.validate(p.n_max);

    double ll = 0.0;
    double t_prev = 0.0;
    int level = rec.initial_level;
    std::size_t pi = 0;
    for (const Event& e : rec.events) {
        ll -= total_outflow(p, level) * (e.t - t_prev);
        const double rate = event_rate(p, level, e.label);
        ll += rate > 0.0 ? std::log(rate) : -std::numeric_limits<double>::infinity();
        if (e.label != 2) level = rec.path[pi++].level;
        t_prev = e.t;
    }
    ll -= total_outflow(p, level) * (rec.horizon - t_prev);
    return ll;
}

FullMleResult full_monitoring_mle(const FullRecord& rec,
                                  std::pair<double, double> search, int n_max) {
    rec.validate(n_max);
    const double lo = search.first, hi = search.second;
    if (!(lo > 0.0) || !(hi > lo))
        throw DomainError("full_monitoring_mle: bad search interval");

    // Only the atom-label terms depend on phi (the surviving outflow is
    // N_ex + nu(k+1) + (nu+1)k regardless); reduce to per-level counts.
    std::vector<double> c1(static_cast<std::size_t>(n_max) + 1, 0.0);
    std::vector<double> c2(c1.size(), 0.0);
    int level = rec.initial_level;
    std::size_t pi = 0;
    for (const Event& e : rec.events) {
        if (e.label == 1) c1[static_cast<std::size_t>(level)] += 1.0;
        if (e.label == 2) c2[static_cast<std::size_t>(level)] += 1.0;
        if (e.label != 2) level = rec.path[pi++].level;
    }

    auto ll_shape = [&](double phi) {
        double ll = 0.0;
        for (std::size_t k = 0; k < c1.size(); ++k) {
            if (c1[k] == 0.0 && c2[k] == 0.0) continue;
            const double a = phi * std::sqrt(static_cast<double>(k) + 1.0);
            const double s2 = std::sin(a) * std::sin(a);
            const double c2v = 1.0 - s2;
            if (c1[k] > 0.0)
                ll += c1[k] * (s2 > 0.0 ? std::log(s2)
                                        : -std::numeric_limits<double>::infinity());
            if (c2[k] > 0.0)
                ll += c2[k] * (c2v > 0.0 ? std::log(c2v)
                                         : -std::numeric_limits<double>::infinity());
        }
        return ll;
    };

    // Dense scan (evaluations are cheap) followed by a parabolic-free golden
    // refinement through the generic FD machinery in mle.hpp.
    const int g = 241;
    const double step = (hi - lo) / (g - 1);
    double best_phi = lo, best_ll = ll_shape(lo);
    for (int i = 1; i < g; ++i) {
        const double phi = lo + step * i;
        const double v = ll_shape(phi);
        if (v > best_ll) {
            best_ll = v;
            best_phi = phi;
        }
    }
    const double blo = std::max(lo, best_phi - step);
    const double bhi = std::min(hi, best_phi + step);
    double a = blo, b = bhi;
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = ll_shape(x1), f2 = ll_shape(x2);
    while (b - a > 1e-7) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = ll_shape(x2);
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = ll_shape(x1);
        }
    }

    FullMleResult res;
    res.phi_hat = 0.5 * (a + b);
    res.boundary = (res.phi_hat - lo) < 1e-6 || (hi - res.phi_hat) < 1e-6;
    res.observed_fisher = observed_fisher_of(ll_shape, res.phi_hat, 1e-3, nullptr);
    return res;
}

} // namespace maser
