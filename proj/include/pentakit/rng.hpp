#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace pentakit {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Key for an independent substream of `seed`.
constexpr std::uint64_t substream(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(seed ^ mix64(index ^ 0x2545f4914f6cdd1dULL));
}

/// Counter-based generator: value k of a stream is a pure function of
/// (key, k), so draws can be made in any order or in parallel.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

  constexpr std::uint64_t at(std::uint64_t counter) const noexcept {
    return mix64(key_ ^ mix64(counter));
  }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform_at(std::uint64_t counter) const noexcept {
    return static_cast<double>(at(counter) >> 11) * 0x1.0p-53;
  }
  /// Two independent N(0,1) draws from counters 2k and 2k+1 (Box-Muller).
  std::pair<double, double> normal_pair_at(std::uint64_t k) const noexcept {
    const double u1 = 1.0 - uniform_at(2 * k);  // (0, 1]
    const double u2 = uniform_at(2 * k + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(th), r * std::sin(th)};
  }

  // Sequential interface.
  std::uint64_t next_u64() noexcept { return at(counter_++); }
  double uniform() noexcept { return uniform_at(counter_++); }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace pentakit
