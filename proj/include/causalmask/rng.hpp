#pragma once

#include <cmath>
#include <cstdint>

namespace causalmask {

// Counter-based splittable RNG. Every consumer derives its own stream from a
// base seed plus up to three tag words, so draws are reproducible regardless
// of evaluation order or thread count.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

class StreamRng {
 public:
  explicit StreamRng(std::uint64_t key) : key_(key) {}

  static StreamRng derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0) {
    std::uint64_t k = mix64(seed + kGolden);
    k = mix64(k ^ (a + kGolden));
    k = mix64(k ^ (b + kGolden));
    k = mix64(k ^ (c + kGolden));
    return StreamRng(k);
  }

  std::uint64_t next_u64() {
    counter_ += kGolden;
    return mix64(key_ + counter_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  double gaussian(double mean, double sd) {
    // Box-Muller; u1 shifted away from zero so log stays finite.
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * r * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace causalmask
