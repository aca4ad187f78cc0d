#pragma once

#include <cstdint>
#include <random>

namespace ncia {

/// Generator owned by exactly one trial (or one protocol run) at a time.
using Rng = std::mt19937_64;

/// SplitMix64 output function (Steele, Lea, Flood).
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of trial `index` in a campaign started from `base_seed`: the
/// (index+1)-th output of a SplitMix64 stream whose state starts at base_seed.
constexpr std::uint64_t mix_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
    return splitmix64(base_seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

} // namespace ncia
