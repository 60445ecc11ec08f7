#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace maser {

// SplitMix64 finalizer; used for seed derivation so that per-stage and
// per-trial streams are decorrelated from a single base seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(splitmix64(base) ^ splitmix64(stream + 0x6a09e667f3bcc909ULL));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t sub) {
    return derive_seed(derive_seed(base, stream), sub);
}

// Deterministic random stream. Distributions are inverted explicitly from
// raw 64-bit draws so that identical seeds give identical results on every
// platform (std:: distributions are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform on the open interval (0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    // Exponential with the given rate; rate must be positive.
    double exponential(double rate) { return -std::log(uniform()) / rate; }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

} // namespace maser
