#include "maser/filter.hpp"

#include <cmath>
#include <limits>

#include "maser/errors.hpp"
#include "maser/expm.hpp"
#include "maser/state.hpp"
#include "maser/stationary.hpp"

namespace maser {

double log_likelihood(const DetectionRecord& rec, const GeneratorSet& gen) {
    rec.validate();
    const ModelParams& p = gen.params;
    const std::size_t n = gen.l0.size();

    std::vector<double> state = stationary_state(p).probs;
    std::vector<double> jumped(n);
    ExpmWorkspace ws;

    double ll = 0.0;
    double t_prev = 0.0;
    for (const Event& e : rec.events) {
        if (e.label != 1 && e.label != 2)
            throw FormatError("log_likelihood: record must contain atom labels only");

        ll += propagate_log(gen.l0, e.t - t_prev, state, ws);
        if (!std::isfinite(ll)) return -std::numeric_limits<double>::infinity();

        const JumpOp& j = e.label == 1 ? gen.j1 : gen.j2;
        j.apply(state, jumped);
        const double s = vector_sum(jumped);
        if (!(s > 0.0)) return -std::numeric_limits<double>::infinity();
        ll += std::log(s);
        const double inv = 1.0 / s;
        for (std::size_t i = 0; i < n; ++i) state[i] = jumped[i] * inv;
        t_prev = e.t;
    }

    ll += propagate_log(gen.l0, rec.horizon - t_prev, state, ws);
    return ll;
}

double log_likelihood(const DetectionRecord& rec, const ModelParams& p) {
    return log_likelihood(rec, build_generators(p));
}

} // namespace maser
