#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

namespace smoothcert {

/// Element of R^n. Always at least one coordinate, every coordinate finite.
/// Immutable once constructed.
class Vector {
 public:
  explicit Vector(std::vector<double> coords);
  Vector(std::initializer_list<double> coords);

  static Vector zeros(std::size_t dim);
  static Vector filled(std::size_t dim, double value);

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const noexcept { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }
  const std::vector<double>& values() const noexcept { return coords_; }

  auto begin() const noexcept { return coords_.begin(); }
  auto end() const noexcept { return coords_.end(); }

  bool operator==(const Vector&) const = default;

 private:
  std::vector<double> coords_;
};

// Throws DimensionError naming both dimensions when they differ.
void require_same_dim(const Vector& a, const Vector& b, std::string_view op);

// Summation is strictly left-to-right over the index, so dot(u, v) and
// dot(v, u) are bit-identical.
double dot(const Vector& u, const Vector& v);
double norm_sq(const Vector& v);
double eu_norm(const Vector& v);
double metric_sq(const Vector& x, const Vector& y);
double eu_metric(const Vector& x, const Vector& y);

Vector vec_add(const Vector& x, const Vector& y);
Vector vec_sub(const Vector& x, const Vector& y);
Vector scalar_mul(double a, const Vector& x);

/// alpha*x + (1-alpha)*y. Throws RangeError unless 0 <= alpha <= 1.
Vector convex_combo(double alpha, const Vector& x, const Vector& y);

}  // namespace smoothcert
