#pragma once

// Counter-based random streams. Every draw is a pure function of
// (seed, replicate, item, axis), so replicates can run in any order, or
// concurrently, and reproduce bit-identically.

#include <cstdint>

#include "pwd/prob.hpp"

namespace pwd::rng {

// splitmix64 finalizer; full-avalanche 64-bit mix.
inline std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

// Chain a counter word into a key. Chaining (rather than xoring structured
// integers together) keeps distinct counter tuples from colliding.
inline std::uint64_t chain(std::uint64_t key, std::uint64_t word) {
    return mix(key + 0x9E3779B97F4A7C15ULL * (word + 0x632BE59BD9B4E019ULL));
}

// Uniform in the open interval (0, 1); 53-bit mantissa, never 0 or 1.
inline double to_unit(std::uint64_t k) {
    return (static_cast<double>(k >> 11) + 0.5) * 0x1.0p-53;
}

inline double uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return to_unit(chain(chain(chain(mix(seed ^ 0xD1B54A32D192ED03ULL), a), b), c));
}

inline double standard_normal(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                              std::uint64_t c) {
    return normal_quantile(uniform(seed, a, b, c));
}

}  // namespace pwd::rng
