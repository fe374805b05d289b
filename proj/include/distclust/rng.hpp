#pragma once

#include <cstdint>
#include <random>

namespace distclust {

using Rng = std::mt19937_64;

/// Seed for trial `trial` of a batch seeded with `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial) {
  return seed ^ (trial * 0x9E3779B97F4A7C15ULL);
}

}  // namespace distclust
