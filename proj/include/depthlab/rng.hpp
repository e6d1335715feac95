#pragma once

#include <cstdint>
#include <stdexcept>

namespace depthlab {

// xorshift64*; the exact generator is part of the corpus and scenario
// formats, so it is spelled out here rather than taken from <random>.
class Xorshift64Star {
 public:
  explicit Xorshift64Star(std::uint64_t seed) : state_(seed) {
    if (seed == 0) throw std::invalid_argument("xorshift64* seed must be nonzero");
  }

  // Accepts any seed, zero included, by scrambling it with splitmix64.
  static Xorshift64Star from_any_seed(std::uint64_t seed) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    return Xorshift64Star(z == 0 ? 0x9E3779B97F4A7C15ull : z);
  }

  std::uint64_t next() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 2685821657736338717ull;
  }

  std::uint8_t next_byte() { return static_cast<std::uint8_t>(next() >> 56); }

  // Uniform in [0, bound), by rejection; bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace depthlab
