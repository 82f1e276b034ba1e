// abscat: Aharonov-Bohm scattering off a magnetic vortex in conical space.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace abscat::detail {

// splitmix64 finalizer (Steele, Lea, Flood 2014). Used in counter mode:
// sample i of stream `seed` is mix(seed + (i+1)*golden_gamma), which makes
// every sample a pure function of (seed, i) independent of chunking or
// thread count.
inline constexpr std::uint64_t splitmix64_gamma = 0x9e3779b97f4a7c15ull;

inline std::uint64_t splitmix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Uniform deviate in [0, 1): 53 mantissa bits of the counter-mode stream.
inline double uniform_sample(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t z = splitmix64(seed + (index + 1) * splitmix64_gamma);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

}  // namespace abscat::detail
