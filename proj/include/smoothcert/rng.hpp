#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace smoothcert {

// Counter-based stream: (seed, stream index) fully determines the sequence,
// so sample i is reproducible without generating samples 0..i-1 and is the
// same no matter which worker draws it. Conversions to double are spelled
// out here so results do not depend on the standard library's distributions.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : state_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1).
  double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi].
  double uniform(double lo, double hi) noexcept {
    const double t = lo + (hi - lo) * uniform();
    return t > hi ? hi : t;
  }

  // Standard normal via Box-Muller (one value per call).
  double normal() noexcept {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t below(std::uint64_t n) noexcept { return next() % n; }

 private:
  std::uint64_t state_;
};

// Derived seed for an independent sample family (e.g. the fresh-seed re-check
// after bisection, or a condition-specific stream).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) noexcept {
  return CounterRng::mix(seed + CounterRng::mix(salt));
}

}  // namespace smoothcert
