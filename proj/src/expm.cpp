#include "maser/expm.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "maser/errors.hpp"
#include "maser/state.hpp"

namespace maser {

namespace {

// Largest Poisson rate handled in a single uniformization step; exp(-500)
// is still comfortably inside the normal double range.
constexpr double kMaxStepRate = 500.0;

// One uniformization step: y = e^{tau*gen} x with lambda*tau <= kMaxStepRate.
// P = I + gen/lambda is entrywise nonnegative, so every series term is
// nonnegative and the truncation error is bounded by the Poisson tail.
void expm_step(const Tridiag& gen, double lambda, std::span<const double> x,
               double tau, std::span<double> y, ExpmWorkspace& ws) {
    const std::size_t n = gen.size();
    const double r = lambda * tau;

    ws.term.assign(x.begin(), x.end());
    ws.swap.resize(n);

    double weight = std::exp(-r); // Poisson(k=0) weight
    for (std::size_t i = 0; i < n; ++i) y[i] = weight * ws.term[i];

    double cumulative = weight;
    const double inv_lambda = 1.0 / lambda;
    for (std::size_t k = 1;; ++k) {
        // term <- P term, P = I + gen/lambda.
        gen.apply(ws.term, ws.swap);
        for (std::size_t i = 0; i < n; ++i)
            ws.swap[i] = ws.term[i] + inv_lambda * ws.swap[i];
        ws.term.swap(ws.swap);

        weight *= r / static_cast<double>(k);
        for (std::size_t i = 0; i < n; ++i) y[i] += weight * ws.term[i];
        cumulative += weight;

        if (static_cast<double>(k) > r && 1.0 - cumulative < 1e-15) break;
        if (k > static_cast<std::size_t>(r + 60.0 * std::sqrt(r + 1.0) + 60.0))
            break; // Poisson tail is far below double precision by here
    }
}

} // namespace

void apply_expm(const Tridiag& gen, std::span<const double> x, double tau,
                std::span<double> y, ExpmWorkspace& ws) {
    const std::size_t n = gen.size();
    assert(x.size() == n && y.size() == n);
    if (tau < 0.0) throw DomainError("apply_expm: tau must be nonnegative");

    const double lambda = gen.max_abs_diag();
    if (tau == 0.0 || lambda == 0.0) {
        std::copy(x.begin(), x.end(), y.begin());
        return;
    }

    const int steps = std::max(1, static_cast<int>(std::ceil(lambda * tau / kMaxStepRate)));
    const double dt = tau / static_cast<double>(steps);
    expm_step(gen, lambda, x, dt, y, ws);
    for (int s = 1; s < steps; ++s) {
        ws.acc.assign(y.begin(), y.end());
        expm_step(gen, lambda, ws.acc, dt, y, ws);
    }
}

std::vector<double> apply_expm(const Tridiag& gen, std::span<const double> x,
                               double tau) {
    ExpmWorkspace ws;
    std::vector<double> y(gen.size());
    apply_expm(gen, x, tau, y, ws);
    return y;
}

double propagate_log(const Tridiag& gen, double tau, std::vector<double>& state,
                     ExpmWorkspace& ws) {
    if (tau < 0.0) throw DomainError("propagate_log: tau must be nonnegative");
    const std::size_t n = gen.size();
    assert(state.size() == n);
    if (tau == 0.0) return 0.0;

    const double lambda = gen.max_abs_diag();
    if (lambda == 0.0) return 0.0;

    // Substep so each renormalization happens before the scale can decay
    // below ~e^{-500}.
    const int steps = std::max(1, static_cast<int>(std::ceil(lambda * tau / kMaxStepRate)));
    const double dt = tau / static_cast<double>(steps);

    double log_scale = 0.0;
    ws.acc.resize(n);
    for (int s = 0; s < steps; ++s) {
        expm_step(gen, lambda, state, dt, ws.acc, ws);
        const double total = vector_sum(ws.acc);
        if (!(total > 0.0))
            return -std::numeric_limits<double>::infinity();
        log_scale += std::log(total);
        const double inv = 1.0 / total;
        for (std::size_t i = 0; i < n; ++i) state[i] = ws.acc[i] * inv;
    }
    return log_scale;
}

} // namespace maser
