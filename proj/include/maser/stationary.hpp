#pragma once

#include "maser/params.hpp"
#include "maser/state.hpp"

namespace maser {

// Stationary state of the master dynamics on the truncated space, from the
// birth-death product formula evaluated in log space and normalized over
// 0..n_max.
DiagonalState stationary_state(const ModelParams& p);

// Mass the untruncated stationary distribution places above n_max,
// estimated by extending the product formula well past the truncation.
double stationary_tail_mass(const ModelParams& p);

// Throws TruncationError when the tail mass exceeds p.tail_tol.
void validate_truncation(const ModelParams& p);

} // namespace maser
