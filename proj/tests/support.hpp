#pragma once

// Test-side oracles and generators. Nothing here calls into the library's
// arithmetic: sums run in long double and draws come from std::mt19937_64.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "smoothcert/conditions.hpp"
#include "smoothcert/funcs.hpp"
#include "smoothcert/vecspace.hpp"

namespace sctest {

using Coords = std::vector<double>;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double real(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  double unit() { return real(0.0, 1.0); }
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(eng_);
  }
  Coords coords(std::size_t dim, double lo = -10.0, double hi = 10.0) {
    Coords c(dim);
    for (double& v : c) v = real(lo, hi);
    return c;
  }
  smoothcert::Vector vec(std::size_t dim, double lo = -10.0, double hi = 10.0) {
    return smoothcert::Vector(coords(dim, lo, hi));
  }

 private:
  std::mt19937_64 eng_;
};

namespace oracle {

inline long double dot(const Coords& u, const Coords& v) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < u.size(); ++i) s += static_cast<long double>(u[i]) * v[i];
  return s;
}

inline long double dist(const Coords& u, const Coords& v) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const long double d = static_cast<long double>(u[i]) - v[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// f(x) = sum d_i x_i^2 and its gradient 2 d x.
struct DiagQuad {
  Coords d;

  long double f(const Coords& x) const {
    long double s = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) s += static_cast<long double>(d[i]) * x[i] * x[i];
    return s;
  }
  Coords g(const Coords& x) const {
    Coords out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = 2.0 * d[i] * x[i];
    return out;
  }
};

// Five-point stencil, independent of the library's central differences.
inline Coords fd5(const std::function<double(const Coords&)>& f, const Coords& x,
                  double h = 1e-3) {
  Coords out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto at = [&](double t) {
      Coords p = x;
      p[i] += t;
      return static_cast<long double>(f(p));
    };
    out[i] = static_cast<double>((-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h));
  }
  return out;
}

// Residual of every condition for DiagQuad, from the written formulas.
inline long double residual(smoothcert::ConditionId c, const DiagQuad& q, long double L,
                            const Coords& x, const Coords& y, long double a) {
  using smoothcert::ConditionId;
  const Coords gx = q.g(x), gy = q.g(y);
  Coords ymx(x.size()), gmg(x.size()), xmy(x.size()), z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    ymx[i] = y[i] - x[i];
    xmy[i] = x[i] - y[i];
    gmg[i] = gx[i] - gy[i];
    z[i] = static_cast<double>(a * x[i] + (1 - a) * y[i]);
  }
  const long double dxy2 = dot(xmy, xmy), dg2 = dot(gmg, gmg);
  switch (c) {
    case ConditionId::Nest0: return std::sqrt(dg2) - L * std::sqrt(dxy2);
    case ConditionId::Nest1: return q.f(y) - q.f(x) - dot(gx, ymx) - L / 2 * dxy2;
    case ConditionId::Nest2: return q.f(x) + dot(gx, ymx) + dg2 / (2 * L) - q.f(y);
    case ConditionId::Nest3: return dg2 / L - dot(gmg, xmy);
    case ConditionId::Nest4: return dot(gmg, xmy) - L * dxy2;
    case ConditionId::Nest5:
      return q.f(z) + a * (1 - a) / (2 * L) * dg2 - a * q.f(x) - (1 - a) * q.f(y);
    case ConditionId::Nest6:
      return a * q.f(x) + (1 - a) * q.f(y) - q.f(z) - a * (1 - a) * L / 2 * dxy2;
    case ConditionId::Convex0: return q.f(z) - a * q.f(x) - (1 - a) * q.f(y);
    case ConditionId::Convex1: return q.f(x) + dot(gx, ymx) - q.f(y);
  }
  return 0.0L;
}

}  // namespace oracle

inline smoothcert::ConditionInstance instance(smoothcert::ConditionId c,
                                              const smoothcert::FunctionHandle& f, double L,
                                              Coords x, Coords y,
                                              std::optional<double> alpha = std::nullopt) {
  return smoothcert::ConditionInstance{c, f, L, smoothcert::Vector(std::move(x)),
                                       smoothcert::Vector(std::move(y)), alpha};
}

inline double rel_err(const smoothcert::Vector& a, const Coords& b) {
  long double num = 0.0L, den = 0.0L;
  for (std::size_t i = 0; i < b.size(); ++i) {
    num += (static_cast<long double>(a[i]) - b[i]) * (static_cast<long double>(a[i]) - b[i]);
    den += static_cast<long double>(b[i]) * b[i];
  }
  return static_cast<double>(std::sqrt(num) / (1.0L + std::sqrt(den)));
}

}  // namespace sctest
