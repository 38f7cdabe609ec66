#pragma once

#include <cstdint>
#include <random>

// Seed derivation and value mapping are written out here instead of using
// std::uniform_*_distribution, whose output is implementation-defined.
// mt19937_64 itself is fully specified, so every draw below is reproducible
// across platforms and compilers.

namespace ssn::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Independent sub-seed for (base, stream, index).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(base ^ (stream * 0x9E3779B97F4A7C15ULL)) + index);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform_real(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(gen);
}

/// Unbiased uniform integer in [0, n).
inline std::uint64_t uniform_index(std::mt19937_64& gen, std::uint64_t n) {
    const std::uint64_t rem = (UINT64_MAX % n + 1) % n; // 2^64 mod n
    const std::uint64_t limit = UINT64_MAX - rem;       // last accepted value is limit
    std::uint64_t x = gen();
    while (rem != 0 && x > limit) x = gen();
    return x % n;
}

} // namespace ssn::rng
