#pragma once

#include <span>
#include <vector>

#include "maser/tridiag.hpp"

namespace maser {

// Scratch buffers for the uniformization loop; reuse across calls in hot
// paths to avoid reallocation.
struct ExpmWorkspace {
    std::vector<double> term, acc, swap;
};

// y = e^{tau * gen} * x by uniformization (Poissonized jump expansion).
// Preserves nonnegativity exactly; for a conservative generator the entry
// sum is preserved to series-truncation accuracy (~1e-14 relative). tau < 0
// throws DomainError.
void apply_expm(const Tridiag& gen, std::span<const double> x, double tau,
                std::span<double> y, ExpmWorkspace& ws);
std::vector<double> apply_expm(const Tridiag& gen, std::span<const double> x,
                               double tau);

// Propagates state <- e^{tau * gen} state with renormalization to unit sum,
// returning log of the accumulated scale (the log survival probability when
// gen is substochastic). Long intervals are substepped internally, so the
// scale never underflows.
double propagate_log(const Tridiag& gen, double tau, std::vector<double>& state,
                     ExpmWorkspace& ws);

} // namespace maser
