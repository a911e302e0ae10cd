#pragma once

#include <cstdint>
#include <string>

namespace netkin {

// xoshiro256++ with splitmix64 state initialization. Pure integer arithmetic
// plus a fixed 53-bit double mapping, so streams are reproducible bit-for-bit
// for a given seed independent of platform. The algorithm name and version
// are recorded in run manifests; bump the version if the stream ever changes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : s_) {
      x += 0x9E3779B97f4A7C15ull;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
      word = z ^ (z >> 31);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Unbiased uniform integer in [0, n); Lemire's method with rejection.
  std::uint64_t next_below(std::uint64_t n) {
    using u128 = unsigned __int128;
    std::uint64_t x = next_u64();
    u128 m = u128(x) * u128(n);
    std::uint64_t lo = std::uint64_t(m);
    if (lo < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        x = next_u64();
        m = u128(x) * u128(n);
        lo = std::uint64_t(m);
      }
    }
    return std::uint64_t(m >> 64);
  }

  bool bernoulli(double p) { return next_double() < p; }

  static std::string algorithm() { return "xoshiro256++ (splitmix64 seeding)"; }
  static std::string version() { return "1"; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

}  // namespace netkin
