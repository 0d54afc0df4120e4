#pragma once

#include <algorithm>
#include <cmath>

namespace smoothcert {

/// The single tolerance authority. An inequality instance is accepted when
/// its residual is at most abs_tol + rel_tol * scale, where scale is
/// max(1, |lhs|, |rhs|).
struct ToleranceMode {
  double abs_tol = 1e-9;
  double rel_tol = 1e-7;

  double threshold(double scale) const noexcept {
    return abs_tol + rel_tol * scale;
  }
  bool accept(double residual, double scale) const noexcept {
    return residual <= threshold(scale);
  }

  static double side_scale(double lhs, double rhs) noexcept {
    return std::max({1.0, std::abs(lhs), std::abs(rhs)});
  }

  // Throws ConfigError unless both tolerances are positive and finite.
  void validate() const;
};

}  // namespace smoothcert
