#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>

namespace grp {

/// SplitMix64 (Steele, Lea, Flood 2014). The exact update and output
/// function are part of the RANSAC sampling contract: other ports must use
/// the same constants to reproduce inlier sets bit for bit.
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// Bounded draws use `next() % n`.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::size_t index(std::size_t n) noexcept {
    return static_cast<std::size_t>(next() % static_cast<std::uint64_t>(n));
  }

  // [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
  }

  // Box-Muller; the cosine branch only, so every call consumes two draws.
  double gaussian() noexcept {
    double u1 = uniform();
    while (u1 <= 0.0) {
      u1 = uniform();
    }
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t state() const noexcept { return state_; }

private:
  std::uint64_t state_;
};

/// Derives an independent stream seed from a base seed and a stream id.
inline std::uint64_t
mix_seed(std::uint64_t base, std::uint64_t stream) noexcept
{
  SplitMix64 g(base ^ (stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
  g.next();
  return g.next();
}

} // namespace grp
