#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace primecoh {

/// Standard normal variates from mt19937_64 via Box-Muller.
///
/// mt19937_64's output sequence is fixed by the standard, and the transform
/// below is ours, so a seed reproduces bit-identical draws on any conforming
/// toolchain (std::normal_distribution does not promise that).
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace primecoh
