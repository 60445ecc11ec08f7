#pragma once

#include <cstddef>
#include <functional>

namespace maser {

// Thread count used when a caller passes 0: MASER_THREADS env var if set,
// otherwise std::thread::hardware_concurrency().
unsigned default_thread_count();

// Runs body(i) for i in [0, n). Work items are claimed from a shared atomic
// counter; results must be written to per-index slots so that the outcome is
// independent of scheduling. The first exception thrown by any worker is
// rethrown after all workers have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

} // namespace maser
