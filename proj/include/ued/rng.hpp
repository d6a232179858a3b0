#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace ued {

// SplitMix64 finalizer. Every random value in the library is a hash of
// (key, counter), so results never depend on call order across threads.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// Immutable RNG state. Stochastic functions take one of these explicitly
/// and derive child keys with split() / fold_in().
struct RngKey {
  std::uint64_t value = 0;
  friend constexpr bool operator==(RngKey, RngKey) = default;
};

constexpr RngKey make_key(std::uint64_t seed) { return RngKey{mix64(seed ^ 0x5851f42d4c957f2dULL)}; }

constexpr RngKey fold_in(RngKey key, std::uint64_t data) {
  return RngKey{mix64(key.value ^ mix64(data * kGolden + 0x632be59bd9b4e019ULL))};
}

constexpr std::pair<RngKey, RngKey> split(RngKey key) {
  return {fold_in(key, 0xa0761d6478bd642fULL), fold_in(key, 0xe7037ed1a0b428dbULL)};
}

/// Draws a sequence of values from one key: output i is mix64(key + i * golden).
class RngStream {
 public:
  explicit constexpr RngStream(RngKey key) : key_(key) {}

  constexpr std::uint64_t next_u64() { return mix64(key_.value + (++counter_) * kGolden); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  constexpr double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Lemire's multiply-shift with rejection, so
  /// there is no modulo bias. n must be positive.
  std::uint64_t uniform_int(std::uint64_t n) {
    using u128 = unsigned __int128;
    u128 m = static_cast<u128>(next_u64()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<u128>(next_u64()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  int uniform_int(int n) { return static_cast<int>(uniform_int(static_cast<std::uint64_t>(n))); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller (one value per two uniforms).
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  constexpr RngKey key() const { return key_; }

 private:
  RngKey key_;
  std::uint64_t counter_ = 0;
};

}  // namespace ued
