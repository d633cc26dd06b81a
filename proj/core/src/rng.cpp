#include "macs/rng.hpp"

namespace macs {

Rng derive_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x6d616373u};
  return Rng(seq);
}

Rng derive_rng(std::uint64_t seed, Stream stream) {
  return derive_rng(seed, static_cast<std::uint64_t>(stream));
}

double uniform01(Rng& rng) { return std::generate_canonical<double, 53>(rng); }

}  // namespace macs
