#pragma once

#include <cstdint>

namespace edgetrack {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Counter-based generator: the stream is a pure function of its key, so draws
// for one pixel never depend on how many draws other pixels made.
class KeyedRng {
 public:
  constexpr KeyedRng(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c = 0)
      : state_(splitmix64(splitmix64(splitmix64(seed ^ 0x6A09E667F3BCC909ull) ^ a) ^ b) ^ c) {}

  constexpr std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits.
  constexpr double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n) by multiply-shift on the high 32 bits.
  constexpr std::uint32_t below(std::uint32_t n) {
    return std::uint32_t((std::uint64_t(next() >> 32) * n) >> 32);
  }

 private:
  std::uint64_t state_;
};

}  // namespace edgetrack
