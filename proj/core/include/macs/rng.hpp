#pragma once

#include <cstdint>
#include <random>

namespace macs {

using Rng = std::mt19937_64;

/// Well-known stream identifiers split from a run's master seed. Keeping the
/// environment and the policy on separate streams means a policy's random
/// choices never shift the truth/budget/request sequence another policy sees.
enum class Stream : std::uint64_t {
  kTopology = 0,
  kEnvironment = 1,
  kPolicy = 2,
  kHistory = 3,
  kNetInit = 4,
};

/// Deterministically derives an independent generator from (seed, stream).
Rng derive_rng(std::uint64_t seed, Stream stream);
Rng derive_rng(std::uint64_t seed, std::uint64_t stream);

/// Uniform real in [0, 1).
double uniform01(Rng& rng);

}  // namespace macs
