#include "maser/stats.hpp"

#include <algorithm>
#include <cmath>

#include "maser/errors.hpp"
#include "maser/expm.hpp"
#include "maser/state.hpp"
#include "maser/stationary.hpp"
#include "maser/tridiag.hpp"

namespace maser {

SummaryStatistics extract(const DetectionRecord& rec, double window_s) {
    if (!(window_s > 0.0)) throw DomainError("extract: window_s must be positive");
    rec.validate();

    SummaryStatistics st;
    st.window_s = window_s;

    std::vector<double> t1, t2;
    for (const Event& e : rec.events)
        (e.label == 1 ? t1 : t2).push_back(e.t);
    st.total_1 = t1.size();
    st.total_2 = t2.size();

    auto gaps = [](const std::vector<double>& ts) {
        std::vector<double> g;
        if (ts.size() >= 2) {
            g.reserve(ts.size() - 1);
            for (std::size_t i = 1; i < ts.size(); ++i)
                g.push_back(ts[i] - ts[i - 1]);
            std::sort(g.begin(), g.end());
        }
        return g;
    };
    st.wait_1 = gaps(t1);
    st.wait_2 = gaps(t2);

    // Maximal runs of identical labels, boundary runs included.
    std::size_t run_sum[2] = {0, 0};
    std::size_t run_count[2] = {0, 0};
    int cur_label = 0;
    std::size_t cur_len = 0;
    for (const Event& e : rec.events) {
        if (e.label == cur_label) {
            ++cur_len;
        } else {
            if (cur_label != 0) {
                run_sum[cur_label - 1] += cur_len;
                ++run_count[cur_label - 1];
            }
            cur_label = e.label;
            cur_len = 1;
        }
    }
    if (cur_label != 0) {
        run_sum[cur_label - 1] += cur_len;
        ++run_count[cur_label - 1];
    }
    st.runmean_1 = run_count[0] ? static_cast<double>(run_sum[0]) / run_count[0] : 0.0;
    st.runmean_2 = run_count[1] ? static_cast<double>(run_sum[1]) / run_count[1] : 0.0;

    // Local density: ground detections strictly inside (t - s, t) per
    // excited detection at t, divided by s.
    st.local_density.reserve(t2.size());
    for (double t : t2) {
        const double lo = t - window_s;
        if (lo < 0.0) ++st.truncated_windows;
        const auto begin = std::upper_bound(t1.begin(), t1.end(), lo);
        const auto end = std::lower_bound(t1.begin(), t1.end(), t);
        st.local_density.push_back(static_cast<double>(end - begin) / window_s);
    }
    std::sort(st.local_density.begin(), st.local_density.end());
    return st;
}

double ks_two_sample(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty())
        throw EmptySampleError("ks_two_sample: empty sample");
    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() || j < y.size()) {
        double v;
        if (i < x.size() && j < y.size())
            v = std::min(x[i], y[j]);
        else
            v = i < x.size() ? x[i] : y[j];
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / nx -
                                 static_cast<double>(j) / ny));
    }
    return d;
}

const char* statistic_name(int id) {
    switch (id) {
        case kTotal1: return "total1";
        case kTotal2: return "total2";
        case kWait1: return "wait1";
        case kWait2: return "wait2";
        case kRunMean1: return "run1";
        case kRunMean2: return "run2";
        case kLocalDensity: return "locden";
    }
    throw DomainError("statistic_name: bad id");
}

int statistic_from_name(const std::string& name) {
    for (int id = 0; id < kNumStatistics; ++id)
        if (name == statistic_name(id)) return id;
    throw ConfigError("unknown statistic '" + name + "'");
}

DistanceVector distances(const SummaryStatistics& sim, const SummaryStatistics& exp) {
    DistanceVector out;
    out.d[kTotal1] = std::abs(static_cast<double>(sim.total_1) -
                              static_cast<double>(exp.total_1));
    out.d[kTotal2] = std::abs(static_cast<double>(sim.total_2) -
                              static_cast<double>(exp.total_2));

    if (!(exp.runmean_1 > 0.0) || !(exp.runmean_2 > 0.0))
        throw DomainError("distances: experimental run means must be positive");
    out.d[kRunMean1] = std::abs(1.0 - sim.runmean_1 / exp.runmean_1);
    out.d[kRunMean2] = std::abs(1.0 - sim.runmean_2 / exp.runmean_2);

    auto ks_slot = [&](int id, const std::vector<double>& a,
                       const std::vector<double>& b) {
        if (a.empty() || b.empty()) {
            out.d[id] = 1.0;
            out.empty_flags |= static_cast<std::uint8_t>(1u << id);
        } else {
            out.d[id] = ks_two_sample(a, b);
        }
    };
    ks_slot(kWait1, sim.wait_1, exp.wait_1);
    ks_slot(kWait2, sim.wait_2, exp.wait_2);
    ks_slot(kLocalDensity, sim.local_density, exp.local_density);
    return out;
}

namespace {

struct WaitingPropagator {
    Tridiag surv;
    JumpOp ja;
    std::vector<double> state; // normalized conditional state
    double log_scale = 0.0;    // log survival mass
    ExpmWorkspace ws;

    WaitingPropagator(const ModelParams& p, Channel a) {
        if (a != Channel::ground_atom && a != Channel::excited_atom)
            throw DomainError("waiting time defined for atom channels only");
        const GeneratorSet g = build_generators(p);
        surv = g.survival(a);
        ja = g.jump(a);
        state = ja.apply(stationary_state(p).probs);
        const double z = vector_sum(state);
        if (!(z > 0.0)) throw NumericalError("waiting time: zero click rate");
        for (double& v : state) v /= z;
    }

    void advance(double dt) { log_scale += propagate_log(surv, dt, state, ws); }

    double pdf() const {
        return ja.intensity(state) * std::exp(log_scale);
    }
    double survival() const { return std::exp(log_scale); }
};

} // namespace

WaitingDensity theoretical_waiting_density(const ModelParams& p, Channel a,
                                           std::span<const double> t_grid) {
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > (i == 0 ? 0.0 : t_grid[i - 1])))
            throw DomainError("waiting density: grid must be positive and increasing");
    }

    WaitingDensity out;
    out.t.assign(t_grid.begin(), t_grid.end());
    out.pdf.resize(t_grid.size());
    out.cdf.resize(t_grid.size());

    WaitingPropagator prop(p, a);
    double cdf = 0.0;
    double t_prev = 0.0;
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        // Composite Simpson over [t_prev, t_k], panels doubled until the
        // integral settles; each pass re-propagates from the checkpoint.
        const WaitingPropagator checkpoint = prop;
        const double width = t_grid[k] - t_prev;
        double integral = 0.0;
        double prev_estimate = 0.0;
        for (int panels = 2;; panels *= 2) {
            WaitingPropagator walk = checkpoint;
            const double h = width / panels;
            double sum = walk.pdf();
            for (int i = 1; i < panels; ++i) {
                walk.advance(h);
                sum += (i % 2 == 1 ? 4.0 : 2.0) * walk.pdf();
            }
            walk.advance(h);
            sum += walk.pdf();
            integral = sum * h / 3.0;
            if (panels >= 4 &&
                std::abs(integral - prev_estimate) <=
                    1e-7 * std::max(cdf + integral, 1e-12))
                break;
            if (panels >= 512) {
                if (std::abs(integral - prev_estimate) >
                    1e-3 * std::max(cdf + integral, 1e-12))
                    throw NumericalError("waiting density: quadrature did not settle");
                break;
            }
            prev_estimate = integral;
        }
        cdf += integral;
        prop.advance(width);
        out.pdf[k] = prop.pdf();
        out.cdf[k] = cdf;
        t_prev = t_grid[k];
    }
    return out;
}

std::vector<double> waiting_cdf_at(const ModelParams& p, Channel a,
                                   std::span<const double> sorted_times) {
    WaitingPropagator prop(p, a);
    std::vector<double> cdf(sorted_times.size());
    double t_prev = 0.0;
    for (std::size_t i = 0; i < sorted_times.size(); ++i) {
        const double t = sorted_times[i];
        if (t < t_prev) throw DomainError("waiting_cdf_at: times must be sorted");
        prop.advance(t - t_prev);
        cdf[i] = 1.0 - prop.survival();
        t_prev = t;
    }
    return cdf;
}

double next_click_prob(const ModelParams& p, Channel b, Channel a) {
    const GeneratorSet g = build_generators(p);
    const std::vector<double> ja_ss = g.jump(a).apply(stationary_state(p).probs);
    const double za = vector_sum(ja_ss);
    if (!(za > 0.0)) throw NumericalError("next_click_prob: zero click rate");
    const std::vector<double> x = solve_tridiag(g.l0, ja_ss);
    return -g.jump(b).intensity(x) / za;
}

double theoretical_runmean(const ModelParams& p, Channel a) {
    const Channel b =
        a == Channel::ground_atom ? Channel::excited_atom : Channel::ground_atom;
    const double pba = next_click_prob(p, b, a);
    if (!(pba > 0.0))
        throw NumericalError("theoretical_runmean: degenerate switch probability");
    return 1.0 / pba;
}

} // namespace maser
