#pragma once

#include <cstdint>
#include <random>

namespace dkaf {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent sub-seeds.
constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stream tags kept distinct from node indices (which are small).
inline constexpr std::uint64_t kLatentStream = 0xA11CE5EEDULL;
inline constexpr std::uint64_t kPilotStream = 0x9110751DULL;
inline constexpr std::uint64_t kTopologyStream = 0x70907061ULL;

}  // namespace dkaf
