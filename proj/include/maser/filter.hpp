#pragma once

#include "maser/generators.hpp"
#include "maser/params.hpp"
#include "maser/record.hpp"

namespace maser {

// Log-likelihood of an atom detection record under the diagonal quantum
// filter: starting from the stationary state, alternate e^{L0 dt} over the
// inter-event gaps with J1/J2 jumps at the events, renormalizing each step
// and accumulating the log scale; the final survival factor over (t_n, T]
// is included. Returns -inf if an event has zero conditional probability.
double log_likelihood(const DetectionRecord& rec, const ModelParams& p);

// Same, with generators already built (hot path for phi grids).
double log_likelihood(const DetectionRecord& rec, const GeneratorSet& gen);

} // namespace maser
