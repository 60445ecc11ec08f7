#include "maser/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "maser/errors.hpp"

namespace maser {

namespace {

// Log of the per-step ratio rho(n)/rho(n-1) of the stationary distribution:
// nu/(nu+1) + (n_ex/(nu+1)) * sin^2(phi sqrt(n))/n. A zero ratio (possible
// only for nu = 0 at a sine node) maps to -inf and zeroes out every higher
// level.
std::vector<double> log_levels(const ModelParams& p, int top) {
    std::vector<double> lw(static_cast<std::size_t>(top) + 1);
    lw[0] = 0.0;
    double acc = 0.0;
    for (int n = 1; n <= top; ++n) {
        const double s = std::sin(p.phi * std::sqrt(static_cast<double>(n)));
        const double ratio =
            p.nu / (p.nu + 1.0) + p.n_ex / (p.nu + 1.0) * s * s / static_cast<double>(n);
        acc += ratio > 0.0 ? std::log(ratio) : -std::numeric_limits<double>::infinity();
        lw[static_cast<std::size_t>(n)] = acc;
    }
    return lw;
}

double log_sum_exp(const double* v, std::size_t n) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, v[i]);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::exp(v[i] - m);
    return m + std::log(s);
}

} // namespace

DiagonalState stationary_state(const ModelParams& p) {
    p.validate();
    const auto lw = log_levels(p, p.n_max);
    const double lz = log_sum_exp(lw.data(), lw.size());
    DiagonalState st;
    st.probs.resize(lw.size());
    for (std::size_t n = 0; n < lw.size(); ++n)
        st.probs[n] = std::exp(lw[n] - lz);
    return st;
}

double stationary_tail_mass(const ModelParams& p) {
    const int top = 2 * p.n_max + 64;
    const auto lw = log_levels(p, top);
    const double l_all = log_sum_exp(lw.data(), lw.size());
    const double l_tail =
        log_sum_exp(lw.data() + p.n_max + 1, lw.size() - static_cast<std::size_t>(p.n_max) - 1);
    if (!std::isfinite(l_tail)) return 0.0;
    return std::exp(l_tail - l_all);
}

void validate_truncation(const ModelParams& p) {
    p.validate();
    const double tail = stationary_tail_mass(p);
    if (tail > p.tail_tol)
        throw TruncationError("n_max=" + std::to_string(p.n_max) +
                              " leaves stationary tail mass " + std::to_string(tail) +
                              " above tolerance");
}

} // namespace maser
