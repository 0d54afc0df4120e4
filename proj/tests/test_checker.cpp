#include "doctest.h"
#include "smoothcert/checker.hpp"
#include "smoothcert/errors.hpp"
#include "smoothcert/fnspec.hpp"
#include "smoothcert/report.hpp"
#include "smoothcert/rng.hpp"
#include "support.hpp"

using namespace smoothcert;

namespace {

SampleConfig cfg_with(std::uint64_t seed, std::size_t n, unsigned workers = 1) {
  SampleConfig c;
  c.seed = seed;
  c.n_samples = n;
  c.workers = workers;
  return c;
}

// Recomputes the residual from the coordinates alone, with a freshly built
// function, so nothing cached in the instance can leak in.
double recompute(const ConditionInstance& inst, const FunctionHandle& fresh) {
  return residual(ConditionInstance{inst.cond, fresh, inst.L, Vector(inst.x.values()),
                                    Vector(inst.y.values()), inst.alpha});
}

}  // namespace

TEST_CASE("rng is a pure function of seed and stream") {
  CounterRng a(5, 17), b(5, 17), c(5, 18), d(6, 17);
  const auto va = a.next();
  CHECK(va == b.next());
  CHECK(va != c.next());
  CHECK(va != d.next());
  CounterRng u(1, 1);
  for (int i = 0; i < 10000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    CHECK(u.below(7) < 7);
  }
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
}

TEST_CASE("sample_instance is deterministic per index and respects the box") {
  const auto f = catalog::norm_sq_fn(3);
  const auto cfg = cfg_with(9, 100);
  for (std::size_t i = 0; i < 100; ++i) {
    const auto a = sample_instance(ConditionId::Convex0, f, 1, cfg, i);
    const auto b = sample_instance(ConditionId::Convex0, f, 1, cfg, i);
    REQUIRE(a);
    REQUIRE(b);
    CHECK(a->x == b->x);
    CHECK(a->y == b->y);
    CHECK(a->alpha == b->alpha);
    CHECK(f.in_domain(a->x));
    CHECK(f.in_domain(a->y));
    CHECK(*a->alpha >= 0.0);
    CHECK(*a->alpha <= 1.0);
  }
  const auto n = catalog::eu_norm_fn(2);
  for (std::size_t i = 0; i < 2000; ++i) {
    const auto s = sample_instance(ConditionId::Convex1, n, 1, cfg, i);
    if (s) {
      CHECK(eu_norm(s->x) >= catalog::kNormExclusionRadius);
      CHECK(eu_norm(s->y) >= catalog::kNormExclusionRadius);
    }
  }
}

TEST_CASE("alpha strategies") {
  const auto f = catalog::norm_sq_fn(2);
  auto cfg = cfg_with(3, 4000);
  cfg.alpha_strategy = AlphaStrategy::EndpointsPlusUniform;
  int zeros = 0, ones = 0;
  for (std::size_t i = 0; i < cfg.n_samples; ++i) {
    const double a = *sample_instance(ConditionId::Nest5, f, 1, cfg, i)->alpha;
    zeros += a == 0.0;
    ones += a == 1.0;
  }
  CHECK(zeros > 300);
  CHECK(ones > 300);
  cfg.alpha_strategy = AlphaStrategy::NearZero;
  for (std::size_t i = 0; i < 200; ++i) {
    const double a = *sample_instance(ConditionId::Nest6, f, 1, cfg, i)->alpha;
    CHECK(a > 0.0);
    CHECK(a <= 0.1);
  }
  CHECK(default_alpha_strategy(ConditionId::Nest5) == AlphaStrategy::EndpointsPlusUniform);
  CHECK(default_alpha_strategy(ConditionId::Convex0) == AlphaStrategy::Uniform01);
  for (auto s : {AlphaStrategy::Uniform01, AlphaStrategy::EndpointsPlusUniform,
                 AlphaStrategy::NearZero}) {
    CHECK(parse_alpha_strategy(to_string(s)) == s);
  }
  CHECK_THROWS_AS(parse_alpha_strategy("bogus"), ConfigError);
}

TEST_CASE("falsify examples") {
  const auto cfg = cfg_with(1, 10000);
  const auto neg = falsify(ConditionId::Convex0, catalog::neg_norm_sq(2), 0, cfg);
  REQUIRE(neg.falsified());
  CHECK(neg.counterexample()->residual > 0);

  const auto ok = falsify(ConditionId::Nest0, catalog::norm_sq_fn(2), 2, cfg);
  CHECK_FALSE(ok.falsified());
  CHECK(ok.worst_residual <= 1e-9 + 1e-7 * 40);

  const auto low = falsify(ConditionId::Nest0, catalog::norm_sq_fn(2), 1.9, cfg);
  REQUIRE(low.falsified());
  const auto& ce = *low.counterexample();
  const double dxy = eu_metric(ce.instance.x, ce.instance.y);
  CHECK(ce.residual == doctest::Approx(0.1 * dxy).epsilon(1e-9));
}

TEST_CASE("verdicts are deterministic and independent of worker count") {
  const auto f = parse_fn_spec("sum(norm2, diagq(1,5))", 2);
  for (ConditionId c : {ConditionId::Nest0, ConditionId::Nest3, ConditionId::Nest5}) {
    const auto one = falsify(c, f, 11, cfg_with(42, 5000, 1));
    const auto again = falsify(c, f, 11, cfg_with(42, 5000, 1));
    const auto four = falsify(c, f, 11, cfg_with(42, 5000, 4));
    CHECK(to_json(one).dump() == to_json(again).dump());
    CHECK(to_json(one).dump() == to_json(four).dump());
    const auto other = falsify(c, f, 11, cfg_with(43, 5000, 1));
    CHECK(to_json(one).dump() != to_json(other).dump());
  }
}

TEST_CASE("counterexamples are sound") {
  const ToleranceMode tol;
  struct Case {
    const char* fn;
    std::size_t dim;
    ConditionId cond;
    double L;
  };
  for (const Case& k : {Case{"neg_norm2", 2, ConditionId::Convex0, 0},
                        Case{"neg_norm2", 3, ConditionId::Convex1, 0},
                        Case{"norm2", 2, ConditionId::Nest0, 1.9},
                        Case{"norm2", 3, ConditionId::Nest4, 1.5},
                        Case{"diagq(1,5)", 2, ConditionId::Nest1, 6},
                        Case{"diagq(1,5)", 2, ConditionId::Nest6, 6},
                        Case{"quartic", 1, ConditionId::Nest0, 2},
                        Case{"quartic", 1, ConditionId::Nest2, 2}}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto v = falsify(k.cond, parse_fn_spec(k.fn, k.dim), k.L, cfg_with(seed, 2000));
      REQUIRE_MESSAGE(v.falsified(), k.fn, " ", to_string(k.cond));
      const auto& ce = *v.counterexample();
      const auto fresh = parse_fn_spec(k.fn, k.dim);
      const auto r0 = evaluate(ConditionInstance{k.cond, fresh, k.L, ce.instance.x,
                                                 ce.instance.y, ce.instance.alpha});
      const auto r1 = evaluate(ConditionInstance{k.cond, fresh, k.L, ce.shrunk_instance.x,
                                                 ce.shrunk_instance.y, ce.shrunk_instance.alpha});
      CHECK(r0.value > tol.threshold(r0.scale()));
      CHECK(r1.value > tol.threshold(r1.scale()));
      CHECK(recompute(ce.shrunk_instance, fresh) == ce.shrunk_residual);
      CHECK(ce.shrunk_residual == r1.value);
      CHECK(ce.shrink_steps <= kMaxShrinkSteps);
    }
  }
}

TEST_CASE("shrinking") {
  const auto neg = catalog::neg_norm_sq(2);
  const ConditionInstance start{ConditionId::Convex0, neg, 1, Vector{3.7, -2.1},
                                Vector{-5.2, 0.4}, 0.81};
  const auto s = shrink(start);
  CHECK(*s.alpha == 0.5);
  CHECK(norm_sq(s.x) + norm_sq(s.y) < norm_sq(start.x) + norm_sq(start.y));
  const auto r = evaluate(s);
  CHECK(r.value > ToleranceMode{}.threshold(r.scale()));

  const auto again = shrink_counterexample(s);
  CHECK(again.steps == 0);
  CHECK(again.instance.x == s.x);
  CHECK(again.instance.y == s.y);

  const auto q = catalog::quartic1d();
  const ConditionInstance far{ConditionId::Nest0, q, 2, Vector{9.3}, Vector{8.1}, std::nullopt};
  const auto sq = shrink(far);
  CHECK(std::abs(sq.x[0]) < 9.3);
  CHECK(std::abs(sq.x[0]) <= 1.0);
  CHECK(residual(sq) > 0);
}

TEST_CASE("skip accounting") {
  // Evaluation fails on a tenth of the box.
  const FunctionHandle holey(
      "holey", 1,
      [](const Vector& x) {
        if (x[0] > 8) throw DomainError("holey", 0);
        return x[0] * x[0];
      });
  for (std::size_t n : {20u, 997u, 4000u}) {
    const auto v = falsify(ConditionId::Nest0, holey, 2.5, cfg_with(8, n, 3));
    CHECK(v.n_checked + v.n_skipped == v.n_samples);
    CHECK(v.n_samples == n);
    if (n >= 997) CHECK(v.n_skipped > 0);
  }
  const FunctionHandle broken(
      "broken", 1, [](const Vector& x) -> double { throw DomainError("broken", 0); (void)x; });
  CHECK_THROWS_AS(falsify(ConditionId::Convex0, broken, 1, cfg_with(1, 100)), ConfigError);
}

TEST_CASE("no false alarms on identities") {
  // convex0 for t^2 is the square identity with the a(1-a)(x-y)^2 term dropped.
  const auto v = falsify(ConditionId::Convex0, catalog::square(), 0, cfg_with(5, 100000, 4));
  CHECK_FALSE(v.falsified());
  CHECK(v.n_checked == 100000);
  CounterRng rng(5, 0);
  double worst = 0;
  for (int i = 0; i < 100000; ++i) {
    const double x = rng.uniform(-10, 10), y = rng.uniform(-10, 10), a = rng.uniform();
    worst = std::max(worst, std::abs(square_identity_gap(x, y, a)));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("suites") {
  const auto ax = axiom_suite(cfg_with(0, 2000));
  CHECK(ax.checks.size() == 8);
  CHECK(ax.all_passed());
  const auto ax2 = axiom_suite(cfg_with(99, 2000));
  CHECK(ax2.all_passed());
  const auto id = identity_suite(cfg_with(0, 2000));
  CHECK(id.all_passed());
  for (const auto& c : id.checks) CHECK(c.n_checked > 0);
}

TEST_CASE("compose precondition spot-check") {
  const auto good = compose_mono(catalog::square_nonneg(), catalog::eu_norm_fn(2));
  CHECK(check_compose_preconditions(good, cfg_with(1, 2000)).passed);
  // t^2 decreases on the negative part of the affine range.
  const auto bad = compose_mono(catalog::square(), catalog::affine(Vector{1, 1}, 0));
  CHECK_FALSE(check_compose_preconditions(bad, cfg_with(1, 2000)).passed);
  CHECK_THROWS_AS(check_compose_preconditions(catalog::norm_sq_fn(2), cfg_with(1, 10)),
                  ConfigError);
}

TEST_CASE("config validation") {
  auto cfg = cfg_with(1, 0);
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.n_samples = 10;
  cfg.tolerance.abs_tol = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.tolerance.abs_tol = 1e-9;
  cfg.workers = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
