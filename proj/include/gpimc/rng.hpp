#pragma once

#include <cstdint>

namespace gpimc {

/// splitmix64. Small state, full 64-bit output, cheap to fork: every
/// (m, d, sample) cell of a sweep gets its own stream derived from the user
/// seed, so records are reproducible independently of evaluation order.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [0, bound) without modulo bias (rejection).
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) return 0;
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::uint64_t state_;
};

/// Finalizer used to mix cell coordinates into the seed.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Stream-split rule: seed -> (m, d, sample) substream. Documented in the
/// README; changing it invalidates pinned sweep output.
inline SplitMix64 cell_stream(std::uint64_t seed, unsigned m, unsigned d,
                              unsigned sample_index) {
  std::uint64_t s = mix64(seed);
  s = mix64(s ^ static_cast<std::uint64_t>(m));
  s = mix64(s ^ static_cast<std::uint64_t>(d));
  s = mix64(s ^ static_cast<std::uint64_t>(sample_index));
  return SplitMix64(s);
}

}  // namespace gpimc
