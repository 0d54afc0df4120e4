#include "doctest.h"
#include "smoothcert/errors.hpp"
#include "smoothcert/vecspace.hpp"
#include "support.hpp"

using namespace smoothcert;
using sctest::Gen;

TEST_CASE("dot on fixed vectors") {
  CHECK(dot(Vector{1, 0}, Vector{0, 1}) == 0.0);
  CHECK(dot(Vector{1, 2}, Vector{3, 4}) == 11.0);
  CHECK(dot(Vector{3, 4}, Vector{3, 4}) == 25.0);
}

TEST_CASE("norms and metrics on fixed vectors") {
  CHECK(eu_norm(Vector{0, 0}) == 0.0);
  CHECK(eu_norm(Vector{3, 4}) == 5.0);
  CHECK(eu_norm(Vector{1, 1, 1, 1}) == 2.0);
  CHECK(norm_sq(Vector{3, 4}) == 25.0);
  CHECK(metric_sq(Vector{1, 0}, Vector{0, 0}) == 1.0);
  CHECK(eu_metric(Vector{0, 0}, Vector{3, 4}) == 5.0);
  CHECK(eu_metric(Vector{1, 1}, Vector{1, 2}) == 1.0);
  const Vector x{2.5, -1.25, 7};
  CHECK(metric_sq(x, x) == 0.0);
  CHECK(eu_metric(x, x) == 0.0);
}

TEST_CASE("componentwise operations") {
  CHECK(scalar_mul(1, Vector{5, 7}) == Vector{5, 7});
  CHECK(vec_sub(Vector{3, 4}, Vector{3, 4}) == Vector{0, 0});
  CHECK(vec_add(Vector{1, 2}, Vector{3, 4}) == Vector{4, 6});
  CHECK(convex_combo(0.5, Vector{0, 0}, Vector{2, 4}) == Vector{1, 2});
  const Vector x{1.5, -2}, y{-3, 8};
  CHECK(convex_combo(1.0, x, y) == x);
  CHECK(convex_combo(0.0, x, y) == y);
}

TEST_CASE("errors") {
  try {
    (void)dot(Vector{1, 2}, Vector{1, 2, 3});
    FAIL("expected DimensionError");
  } catch (const DimensionError& e) {
    CHECK(e.lhs_dim == 2);
    CHECK(e.rhs_dim == 3);
    CHECK(std::string(e.what()).find('2') != std::string::npos);
    CHECK(std::string(e.what()).find('3') != std::string::npos);
  }
  CHECK_THROWS_AS(vec_add(Vector{1}, Vector{1, 2}), DimensionError);
  CHECK_THROWS_AS(metric_sq(Vector{1}, Vector{1, 2}), DimensionError);
  CHECK_THROWS_AS(convex_combo(1.5, Vector{1}, Vector{2}), RangeError);
  CHECK_THROWS_AS(convex_combo(-0.1, Vector{1}, Vector{2}), RangeError);
  CHECK_THROWS_AS(Vector(std::vector<double>{}), RangeError);
  CHECK_THROWS_AS(Vector({1.0, std::nan("")}), RangeError);
  CHECK_THROWS_AS(scalar_mul(INFINITY, Vector{1}), RangeError);
}

TEST_CASE("dot agrees with the long-double oracle") {
  Gen g(11);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + g.index(10);
    const auto u = g.coords(n), v = g.coords(n);
    const double want = static_cast<double>(sctest::oracle::dot(u, v));
    CHECK(std::abs(dot(Vector(u), Vector(v)) - want) <= 1e-12 * (1 + std::abs(want)) + 1e-11);
  }
}

TEST_CASE("inner product and metric axioms on random tuples") {
  Gen g(12);
  const double tol = 1e-9;
  for (std::size_t n : {1u, 2u, 3u, 5u, 10u}) {
    for (int i = 0; i < 2000; ++i) {
      const Vector u = g.vec(n), v = g.vec(n), w = g.vec(n);
      const double a = g.real(-10, 10);
      const double scale = 1 + eu_norm(u) * eu_norm(v) * std::max(1.0, std::abs(a)) +
                           eu_norm(w) * (eu_norm(u) + eu_norm(v));
      CHECK(std::abs(dot(scalar_mul(a, u), v) - a * dot(u, v)) <= tol * scale);
      CHECK(std::abs(dot(vec_add(u, v), w) - dot(u, w) - dot(v, w)) <= tol * scale);
      CHECK(dot(u, v) == dot(v, u));
      CHECK(dot(u, u) >= 0.0);
      CHECK(eu_metric(u, v) == eu_metric(v, u));
      CHECK(eu_metric(u, v) >= 0.0);
      CHECK(eu_metric(u, v) <= eu_metric(u, w) + eu_metric(w, v) + tol * scale);
      const double nu = eu_norm(u);
      CHECK(std::abs(norm_sq(u) - nu * nu) <= 1e-12 * (1 + norm_sq(u)));
      const double m = eu_metric(u, v);
      CHECK(std::abs(metric_sq(u, v) - m * m) <= 1e-12 * (1 + metric_sq(u, v)));
      CHECK(metric_sq(u, v) == norm_sq(vec_sub(u, v)));
    }
  }
}
