// Small deterministic RNG (splitmix64). The simulator and the experiment
// harness need streams that are reproducible byte-for-byte across platforms,
// so we avoid distribution objects whose output is implementation-defined.
#pragma once

#include <cstdint>

namespace georoute {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound) {
    // Rejection sampling keeps the draw unbiased for any bound.
    const std::uint64_t limit = bound * ((~0ULL) / bound);
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % bound;
  }

  bool bernoulli(double p) { return next_double() < p; }

 private:
  std::uint64_t state_;
};

// Derives an independent stream from a parent seed and a stream index.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) {
  SplitMix64 mix(parent ^ (0xA3EC647659359ACDULL * (stream + 1)));
  mix.next_u64();
  return mix.next_u64();
}

}  // namespace georoute
