#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace superpose {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Key for an independent substream. Mixing is applied per coordinate so that
/// (seed, a, b) and (seed, b, a) land in unrelated streams.
inline std::uint64_t derive_key(std::uint64_t seed, std::uint64_t a) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(a + 0x632BE59BD9B4E019ULL));
}

inline std::uint64_t derive_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
  return derive_key(derive_key(seed, a), b);
}

/// xoshiro256** stream. All sampling used by the simulator goes through this
/// class (never through <random> distributions) so that output is identical
/// across standard libraries.
class Stream {
 public:
  explicit Stream(std::uint64_t key) noexcept {
    std::uint64_t x = key;
    for (auto& w : state_) {
      x = splitmix64(x);
      w = x;
    }
  }

  Stream(std::uint64_t seed, std::uint64_t index) noexcept : Stream(derive_key(seed, index)) {}

  std::uint64_t next() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1).
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_closed() noexcept { return 1.0 - uniform(); }

  /// Uniform integer on [0, bound); bound > 0. Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) noexcept {
    __uint128_t m = static_cast<__uint128_t>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<__uint128_t>(next()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Number of failures before the first success of a Bernoulli(p) sequence,
  /// given log_q = log(1 - p) < 0.
  std::uint64_t geometric_skip(double log_q) noexcept {
    const double g = std::floor(std::log(uniform_open_closed()) / log_q);
    return g >= 1.8e19 ? UINT64_MAX : static_cast<std::uint64_t>(g);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace superpose
