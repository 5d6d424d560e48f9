#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

namespace inoc {

/// splitmix64 finalizer; the mixing function behind all derived seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Chains mix64 over (master, i0, i1, ...). Adding grid points to an
/// experiment never perturbs the seeds of existing (index) combinations.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> indices) {
    std::uint64_t h = mix64(master);
    for (std::uint64_t v : indices) h = mix64(h ^ v);
    return h;
}

/// Unbiased integer in [0, n). Rejection sampling on the raw 64-bit stream,
/// so results are identical on every platform for a given mt19937_64 state.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % n;
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace inoc
