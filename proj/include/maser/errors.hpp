#pragma once

#include <stdexcept>
#include <string>

namespace maser {

// Argument outside its admissible range (negative duration, bad parameter, ...).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fock-space truncation too small for the requested computation.
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Linear system singular or too ill-conditioned to solve.
struct SolveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iterative numerical procedure failed to converge.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed record file or inconsistent record contents.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A statistic that needs a nonempty sample received an empty one.
struct EmptySampleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad experiment configuration (unknown keys, missing files, invalid values).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace maser
