#include "maser/simulate.hpp"

#include <cmath>
#include <limits>

#include "maser/errors.hpp"
#include "maser/generators.hpp"
#include "maser/rng.hpp"
#include "maser/stationary.hpp"

namespace maser {

namespace {

int draw_initial_level(const ModelParams& p, Rng& rng) {
    const DiagonalState ss = stationary_state(p);
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t n = 0; n < ss.probs.size(); ++n) {
        acc += ss.probs[n];
        if (u <= acc) return static_cast<int>(n);
    }
    return static_cast<int>(ss.probs.size()) - 1;
}

// Event times cannot collide in exact arithmetic; if rounding ever lands a
// new event on the previous time, nudge it by one ulp to keep the record
// strictly increasing.
double advance(double prev, double t) {
    return t > prev ? t : std::nextafter(prev, std::numeric_limits<double>::infinity());
}

} // namespace

FullRecord simulate(const ModelParams& p, double horizon, std::uint64_t seed,
                    const SimulateOptions& opts) {
    if (!(horizon > 0.0)) throw DomainError("simulate: horizon must be positive");
    validate_truncation(p);

    Rng rng(seed);
    FullRecord rec;
    rec.horizon = horizon;
    if (opts.attach_meta) {
        rec.meta.params = p;
        rec.meta.seed = seed;
    }

    int level = opts.initial_level ? *opts.initial_level : draw_initial_level(p, rng);
    if (level < 0 || level > p.n_max)
        throw DomainError("simulate: initial level out of range");
    rec.initial_level = level;

    double t = 0.0;       // start of the current holding interval
    double last_t = 0.0;  // time of the last emitted event
    for (;;) {
        const double q_up = birth_rate(p, level);
        const double q_down = death_rate(p, level);
        const double q_total = q_up + q_down;

        double jump_t = std::numeric_limits<double>::infinity();
        if (q_total > 0.0) jump_t = t + rng.exponential(q_total);
        const double interval_end = std::min(jump_t, horizon);

        // Excited-atom detections on (t, interval_end).
        const double r2 = excited_intensity(p, level);
        if (r2 > 0.0) {
            double s = t;
            for (;;) {
                s += rng.exponential(r2);
                if (s >= interval_end) break;
                const double et = advance(last_t, s);
                rec.events.push_back({et, 2});
                last_t = et;
            }
        }

        if (jump_t >= horizon) break;

        if (rng.uniform() * q_total < q_up) {
            // Up-jump: decide atom versus bath.
            if (level + 1 >= p.n_max)
                throw TruncationError("simulate: cavity path reached n_max; enlarge n_max");
            const int label = rng.uniform() < atom_fraction_of_birth(p, level) ? 1 : 4;
            ++level;
            const double et = advance(last_t, jump_t);
            rec.events.push_back({et, label});
            rec.path.push_back({et, level});
            last_t = et;
        } else {
            --level;
            const double et = advance(last_t, jump_t);
            rec.events.push_back({et, 3});
            rec.path.push_back({et, level});
            last_t = et;
        }
        t = last_t;
    }

    return rec;
}

} // namespace maser
