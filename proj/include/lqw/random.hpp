#pragma once

#include <cstdint>
#include <random>

#include "lqw/errors.hpp"

namespace lqw {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to fan a master seed out into independent streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of stream `stream` derived from `master`. Distinct streams of one master
/// never share a seed in practice; the mapping is fixed so runs are reproducible.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept
{
    return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

// Stage tags for derive_seed.
namespace stream {
inline constexpr std::uint64_t fixed_weights = 1;
inline constexpr std::uint64_t wheel = 2;
inline constexpr std::uint64_t label = 3;
inline constexpr std::uint64_t batch = 4;
} // namespace stream

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform double in [lo, hi).
inline double uniform_real(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

/// Uniform integer in [0, n), unbiased by rejection.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n)
{
    if (n == 0) {
        throw ParameterError("uniform_index: empty range");
    }
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = rng();
    while (x >= limit) {
        x = rng();
    }
    return x % n;
}

} // namespace lqw
