#pragma once

#include <cstdint>
#include <optional>

#include "maser/params.hpp"
#include "maser/record.hpp"

namespace maser {

struct SimulateOptions {
    // Overrides the stationary draw of the initial cavity level (test hook).
    std::optional<int> initial_level;
    // Attach params/seed provenance to the record metadata.
    bool attach_meta = true;
};

// Simulates the full monitoring record on (0, horizon]: the cavity
// birth-death path by the direct (Gillespie) method, ground-atom/bath
// attribution of each up-jump by a Bernoulli draw with the rate-consistent
// atom fraction, and excited-atom detections as a state-dependent Poisson
// process on each holding interval. Deterministic given (p, horizon, seed).
// Throws TruncationError if the path reaches n_max.
FullRecord simulate(const ModelParams& p, double horizon, std::uint64_t seed,
                    const SimulateOptions& opts = {});

} // namespace maser
