#pragma once

#include <cmath>
#include <cstdint>

namespace mcse {

/// Counter-based deterministic generator (splitmix64 stream). Output for a
/// given key is a pure function of the counter, so independently keyed
/// streams can be consumed in any order.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : key_(key) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Derive an independent stream key from (key, a, b).
  static std::uint64_t derive(std::uint64_t key, std::uint64_t a, std::uint64_t b = 0) {
    return mix(mix(mix(key) ^ (a + 0x632BE59BD9B4E019ULL)) ^ (b + 0x9E3779B97F4A7C15ULL));
  }

  std::uint64_t next_u64() { return mix(key_ + 0x9E3779B97F4A7C15ULL * (++counter_)); }

  /// Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via the polar method.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double v1, v2, s;
    do {
      v1 = 2.0 * next_double() - 1.0;
      v2 = 2.0 * next_double() - 1.0;
      s = v1 * v1 + v2 * v2;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v2 * f;
    has_spare_ = true;
    return v1 * f;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mcse
