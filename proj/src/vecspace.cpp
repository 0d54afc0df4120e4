#include "smoothcert/vecspace.hpp"

#include <cmath>
#include <string>

#include "smoothcert/errors.hpp"

namespace smoothcert {

namespace {

void validate(const std::vector<double>& coords) {
  if (coords.empty()) {
    throw RangeError("Vector: dimension must be at least 1");
  }
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (!std::isfinite(coords[i])) {
      throw RangeError("Vector: coordinate " + std::to_string(i) +
                       " is not finite");
    }
  }
}

}  // namespace

Vector::Vector(std::vector<double> coords) : coords_(std::move(coords)) {
  validate(coords_);
}

Vector::Vector(std::initializer_list<double> coords) : coords_(coords) {
  validate(coords_);
}

Vector Vector::zeros(std::size_t dim) { return filled(dim, 0.0); }

Vector Vector::filled(std::size_t dim, double value) {
  return Vector(std::vector<double>(dim, value));
}

void require_same_dim(const Vector& a, const Vector& b, std::string_view op) {
  if (a.dim() != b.dim()) {
    throw DimensionError(op, a.dim(), b.dim());
  }
}

double dot(const Vector& u, const Vector& v) {
  require_same_dim(u, v, "dot");
  double sum = 0.0;
  for (std::size_t i = 0; i < u.dim(); ++i) {
    sum += u[i] * v[i];
  }
  return sum;
}

double norm_sq(const Vector& v) { return dot(v, v); }

double eu_norm(const Vector& v) { return std::sqrt(norm_sq(v)); }

double metric_sq(const Vector& x, const Vector& y) {
  require_same_dim(x, y, "metric_sq");
  // Same operation sequence as norm_sq(vec_sub(x, y)), without the temporary.
  double sum = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const double d = x[i] - y[i];
    sum += d * d;
  }
  return sum;
}

double eu_metric(const Vector& x, const Vector& y) {
  return std::sqrt(metric_sq(x, y));
}

Vector vec_add(const Vector& x, const Vector& y) {
  require_same_dim(x, y, "vec_add");
  std::vector<double> out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) out[i] = x[i] + y[i];
  return Vector(std::move(out));
}

Vector vec_sub(const Vector& x, const Vector& y) {
  require_same_dim(x, y, "vec_sub");
  std::vector<double> out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) out[i] = x[i] - y[i];
  return Vector(std::move(out));
}

Vector scalar_mul(double a, const Vector& x) {
  if (!std::isfinite(a)) {
    throw RangeError("scalar_mul: scalar is not finite");
  }
  std::vector<double> out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) out[i] = a * x[i];
  return Vector(std::move(out));
}

Vector convex_combo(double alpha, const Vector& x, const Vector& y) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw RangeError("convex_combo: alpha " + std::to_string(alpha) +
                     " outside [0, 1]");
  }
  require_same_dim(x, y, "convex_combo");
  const double beta = 1.0 - alpha;
  std::vector<double> out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) out[i] = alpha * x[i] + beta * y[i];
  return Vector(std::move(out));
}

}  // namespace smoothcert
