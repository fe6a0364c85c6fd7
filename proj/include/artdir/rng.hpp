#pragma once

#include "artdir/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace artdir {

/// Deterministic random source. All variates are derived from the raw
/// mt19937_64 output stream (whose sequence is fixed by the standard), so a
/// seed pins every result bit-for-bit regardless of the stdlib's
/// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Child stream with a seed mixed from (seed, index). Distinct indices
  /// give statistically independent streams; used to make parallel and
  /// sequential evaluation orders agree.
  Rng substream(std::uint64_t index) const {
    return Rng(mix(seed_ + 0x9E3779B97F4A7C15ull * (index + 1)));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in (0, 1]; safe as a log() argument.
  double uniform_pos() { return 1.0 - uniform(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unbiased integer in [0, n).
  std::size_t uniform_index(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
  }

  /// Standard normal via Box-Muller; second variate of each pair is cached.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(2.0 * kPi * u2);
    has_cached_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

  /// Uniform direction on the unit sphere.
  Vec3 unit_sphere() {
    const double w = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 2.0 * kPi);
    const double s = std::sqrt(std::max(0.0, 1.0 - w * w));
    return Vec3(s * std::cos(phi), s * std::sin(phi), w);
  }

  /// k distinct indices from [0, n), Floyd's algorithm, returned sorted.
  std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                      std::size_t k) {
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t j = n - k; j < n; ++j) {
      const std::size_t t = uniform_index(j + 1);
      bool present = false;
      for (const std::size_t v : out) {
        if (v == t) {
          present = true;
          break;
        }
      }
      out.push_back(present ? j : t);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace artdir
