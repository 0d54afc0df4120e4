#include "doctest.h"
#include "smoothcert/errors.hpp"
#include "smoothcert/estimate.hpp"
#include "smoothcert/fnspec.hpp"
#include "smoothcert/report.hpp"
#include "support.hpp"

using namespace smoothcert;

namespace {

SampleConfig cfg_with(std::uint64_t seed, std::size_t n) {
  SampleConfig c;
  c.seed = seed;
  c.n_samples = n;
  c.workers = 2;
  return c;
}

// Largest gradient-difference quotient over pairs that differ in one
// coordinate; exact for diagonal quadratics.
double axis_pair_oracle(const std::vector<double>& d) {
  double best = 0;
  sctest::oracle::DiagQuad q{d};
  for (std::size_t k = 0; k < d.size(); ++k) {
    sctest::Coords x(d.size(), 1.0), y = x;
    y[k] = -3.0;
    const auto gx = q.g(x), gy = q.g(y);
    best = std::max(best, static_cast<double>(sctest::oracle::dist(gx, gy) /
                                              sctest::oracle::dist(x, y)));
  }
  return best;
}

}  // namespace

TEST_CASE("estimate_L examples") {
  const auto q = estimate_L(catalog::norm_sq_fn(2), cfg_with(1, 2000));
  CHECK(std::abs(q.L_hat - 2) <= 1e-9);
  CHECK(estimate_L(catalog::const_fn(2), cfg_with(1, 500)).L_hat == 0.0);
  const auto d = estimate_L(catalog::diag_quadratic({1, 5}), cfg_with(1, 10000));
  CHECK(axis_pair_oracle({1, 5}) == 10.0);
  CHECK(d.L_hat >= 9.5);
  CHECK(d.L_hat <= 10.0 + 1e-9);
  const double quotient = eu_metric(catalog::diag_quadratic({1, 5}).grad(d.argmax_x),
                                    catalog::diag_quadratic({1, 5}).grad(d.argmax_y)) /
                          eu_metric(d.argmax_x, d.argmax_y);
  CHECK(quotient == doctest::Approx(d.L_hat).epsilon(1e-12));
  CHECK(d.n_pairs > 0);
}

TEST_CASE("estimate_L scale covariance") {
  for (const char* spec : {"norm2", "diagq(1,5)", "sum(norm2, diagq(2,3))"}) {
    const auto f = parse_fn_spec(spec, 2);
    const double base = estimate_L(f, cfg_with(7, 3000)).L_hat;
    for (double a : {0.5, 2.0, 10.0}) {
      const double s = estimate_L(scale(a, f), cfg_with(7, 3000)).L_hat;
      CHECK_MESSAGE(std::abs(s - a * base) <= 1e-6 * a * base, spec, " a=", a);
    }
  }
}

TEST_CASE("estimate_L sum subadditivity") {
  const std::vector<FunctionHandle> fs{catalog::norm_sq_fn(2), catalog::diag_quadratic({1, 5}),
                                       catalog::diag_quadratic({4, 0.5}),
                                       catalog::affine(Vector{1, -2}, 0.5),
                                       catalog::const_fn(2)};
  for (std::size_t i = 0; i < fs.size(); ++i) {
    for (std::size_t j = i; j < fs.size(); ++j) {
      const double lf = estimate_L(fs[i], cfg_with(3, 2000)).L_hat;
      const double lg = estimate_L(fs[j], cfg_with(3, 2000)).L_hat;
      const double ls = estimate_L(fn_sum(fs[i], fs[j]), cfg_with(3, 2000)).L_hat;
      CHECK(ls <= lf + lg + 1e-9);
    }
  }
}

TEST_CASE("estimate_L errors") {
  const FunctionHandle broken("broken", 1,
                              [](const Vector&) -> double { throw DomainError("broken", 0); });
  CHECK_THROWS_AS(estimate_L(broken, cfg_with(1, 50)), ConfigError);
}

TEST_CASE("minimal_L examples") {
  const auto cfg = cfg_with(4, 2000);
  const auto q = catalog::norm_sq_fn(2);
  CHECK(minimal_L(ConditionId::Nest0, q, cfg, {0.1, 10}).value == doctest::Approx(2).epsilon(5e-3));
  CHECK(minimal_L(ConditionId::Nest4, q, cfg, {0.1, 10}).value == doctest::Approx(2).epsilon(5e-3));
  const auto k = minimal_L(ConditionId::Nest0, catalog::const_fn(2), cfg, {1e-6, 1});
  CHECK(k.at_lower_end);
  CHECK(k.value == 1e-6);
  CHECK_THROWS_AS(minimal_L(ConditionId::Nest0, q, cfg, {0.1, 1}), BracketError);
  CHECK_THROWS_AS(minimal_L(ConditionId::Nest0, q, cfg, {5, 1}), BracketError);
  CHECK_THROWS_AS(minimal_L(ConditionId::Convex0, q, cfg, {0.1, 10}), ConfigError);
}

TEST_CASE("minimal_L brackets the threshold on its own sample set") {
  const auto cfg = cfg_with(6, 1500);
  for (const char* spec : {"diagq(1,5)", "sum(norm2, diagq(0.5,2))"}) {
    const auto f = parse_fn_spec(spec, 2);
    for (ConditionId c : {ConditionId::Nest0, ConditionId::Nest1, ConditionId::Nest6}) {
      const auto m = minimal_L(c, f, cfg, {1e-3, 1e3});
      CHECK_FALSE(falsify(c, f, m.value, cfg).falsified());
      CHECK(falsify(c, f, m.value * (1 - 1e-3), cfg).falsified());
    }
    for (ConditionId c : {ConditionId::Nest1, ConditionId::Nest6}) {
      const auto m = minimal_L(c, f, cfg, {1e-3, 1e3});
      for (double k : {1.0, 1.001, 1.5, 3.0, 100.0}) {
        CHECK(!falsify(c, f, m.value * k, cfg).falsified());
      }
    }
  }
}

TEST_CASE("equivalence report") {
  const auto cfg = cfg_with(2, 2000);
  const auto ok = equivalence_report(catalog::norm_sq_fn(2), 2, cfg);
  CHECK(ok.all_hold());
  CHECK(ok.discrepancies.empty());
  CHECK(ok.gate_passed());
  CHECK(ok.equivalence_verified());
  CHECK(ok.edges.size() == 9);
  CHECK(ok.verdicts.size() == 7);

  const auto low = equivalence_report(catalog::norm_sq_fn(2), 1, cfg);
  CHECK(low.verdict(ConditionId::Nest0).falsified());
  int falsified = 0;
  for (const auto& v : low.verdicts) falsified += v.falsified();
  CHECK(falsified >= 2);
  CHECK_FALSE(low.equivalence_verified());
  CHECK_NOTHROW(to_json(low).dump());

  const auto quart = equivalence_report(catalog::quartic1d(), 2, cfg);
  CHECK(quart.verdict(ConditionId::Nest0).falsified());

  const auto neg = equivalence_report(catalog::neg_norm_sq(2), 2, cfg);
  REQUIRE(neg.convexity_gate);
  CHECK(neg.convexity_gate->falsified());
  CHECK_FALSE(neg.gate_passed());
  CHECK_FALSE(neg.equivalence_verified());
  CHECK(neg.summary().find("convexity gate failed") != std::string::npos);
}

TEST_CASE("discrepancies are edges whose source holds and target fails") {
  const auto cfg = cfg_with(3, 800);
  for (const char* spec : {"norm2", "diagq(1,5)", "quartic", "neg_norm2", "norm"}) {
    const std::size_t dim = std::string(spec) == "quartic" ? 1 : 2;
    const auto f = parse_fn_spec(spec, dim);
    for (double L : {0.5, 2.0, 9.0}) {
      const auto r = equivalence_report(f, L, cfg);
      for (const auto& d : r.discrepancies) {
        CHECK(std::find(r.edges.begin(), r.edges.end(), d.edge) != r.edges.end());
        CHECK_FALSE(r.verdict(d.edge.from).falsified());
        CHECK(r.verdict(d.edge.to).falsified());
      }
      if (r.all_hold() || r.all_falsified()) CHECK(r.discrepancies.empty());
    }
  }
}

TEST_CASE("catalog functions with a smoothness claim pass at 1.05 L") {
  for (std::size_t n : {1u, 2u, 3u}) {
    for (const auto& f : catalog::all(n)) {
      const auto L0 = f.tags().smooth_L;
      if (!L0 || f.excluded_radius() > 0) continue;
      const double L = std::max(1.05 * *L0, 1e-3);
      const auto r = equivalence_report(f, L, cfg_with(10 + n, 2000));
      CHECK_MESSAGE(r.discrepancies.empty(), f.name());
      CHECK_MESSAGE(r.all_hold(), f.name());
    }
  }
  CHECK(equivalence_L(LEstimate{0.0, 1, Vector{0}, Vector{1}}) == 1e-3);
  CHECK(equivalence_L(LEstimate{2.0, 1, Vector{0}, Vector{1}}) == doctest::Approx(2.1));
}
