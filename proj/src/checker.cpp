#include "smoothcert/checker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "parallel.hpp"
#include "smoothcert/errors.hpp"
#include "smoothcert/rng.hpp"

namespace smoothcert {

std::string_view to_string(AlphaStrategy s) noexcept {
  switch (s) {
    case AlphaStrategy::Uniform01: return "uniform01";
    case AlphaStrategy::EndpointsPlusUniform: return "endpoints_plus_uniform";
    case AlphaStrategy::NearZero: return "near_zero";
  }
  return "unknown";
}

AlphaStrategy parse_alpha_strategy(std::string_view name) {
  for (auto s : {AlphaStrategy::Uniform01, AlphaStrategy::EndpointsPlusUniform,
                 AlphaStrategy::NearZero}) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown alpha strategy '" + std::string(name) +
                    "' (expected uniform01, endpoints_plus_uniform, near_zero)");
}

std::string_view to_string(PairStrategy s) noexcept {
  switch (s) {
    case PairStrategy::Independent: return "independent";
    case PairStrategy::Nearby: return "nearby";
  }
  return "unknown";
}

PairStrategy parse_pair_strategy(std::string_view name) {
  for (auto s : {PairStrategy::Independent, PairStrategy::Nearby}) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown pair strategy '" + std::string(name) +
                    "' (expected independent, nearby)");
}

void SampleConfig::validate() const {
  if (n_samples < 1) throw ConfigError("n_samples must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (box) {
    try {
      validate_box(*box, box->size());
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  if (nearby_sigma && (!(*nearby_sigma > 0.0) || !std::isfinite(*nearby_sigma))) {
    throw ConfigError("nearby sigma must be positive and finite");
  }
  tolerance.validate();
}

AlphaStrategy default_alpha_strategy(ConditionId cond) noexcept {
  return (cond == ConditionId::Nest5 || cond == ConditionId::Nest6)
             ? AlphaStrategy::EndpointsPlusUniform
             : AlphaStrategy::Uniform01;
}

Box effective_box(const FunctionHandle& f, const SampleConfig& cfg) {
  if (!cfg.box) return f.box();
  if (cfg.box->size() != f.dim()) {
    throw ConfigError("box override has " + std::to_string(cfg.box->size()) +
                      " intervals but the function has dimension " +
                      std::to_string(f.dim()));
  }
  return *cfg.box;
}

namespace {

double draw_alpha(CounterRng& rng, AlphaStrategy strategy) {
  switch (strategy) {
    case AlphaStrategy::Uniform01:
      return rng.uniform(0.0, 1.0);
    case AlphaStrategy::EndpointsPlusUniform: {
      const auto pick = rng.below(8);
      const double u = rng.uniform(0.0, 1.0);
      if (pick == 0) return 0.0;
      if (pick == 1) return 1.0;
      return u;
    }
    case AlphaStrategy::NearZero: {
      const auto k = 1 + rng.below(6);
      return std::pow(10.0, -static_cast<double>(k));
    }
  }
  return 0.5;
}

Vector uniform_point(CounterRng& rng, const Box& box) {
  std::vector<double> c(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    c[i] = rng.uniform(box[i].lo, box[i].hi);
  }
  return Vector(std::move(c));
}

Vector nearby_point(CounterRng& rng, const Vector& x, const Box& box,
                    const std::optional<double>& sigma) {
  std::vector<double> c(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    const double s = sigma ? *sigma : 0.1 * box[i].width();
    c[i] = std::clamp(x[i] + s * rng.normal(), box[i].lo, box[i].hi);
  }
  return Vector(std::move(c));
}

bool in_excluded_ball(const FunctionHandle& f, const Vector& v) {
  const double r = f.excluded_radius();
  return r > 0.0 && norm_sq(v) < r * r;
}

struct SampleOutcome {
  bool skipped = true;
  bool violates = false;
  double residual = 0.0;
};

// Violation test shared by falsify and shrink. nullopt: not a violation
// (including instances that cannot be evaluated).
std::optional<double> violation(const ConditionInstance& inst,
                                const ToleranceMode& tol) {
  try {
    const Residual r = evaluate(inst);
    if (!tol.accept(r.value, r.scale())) return r.value;
  } catch (const Error&) {
  }
  return std::nullopt;
}

}  // namespace

std::optional<ConditionInstance> sample_instance(ConditionId cond,
                                                 const FunctionHandle& f,
                                                 double L,
                                                 const SampleConfig& cfg,
                                                 std::size_t index) {
  const Box box = effective_box(f, cfg);
  CounterRng rng(cfg.seed, index);
  Vector x = uniform_point(rng, box);
  Vector y = cfg.pair_strategy == PairStrategy::Nearby
                 ? nearby_point(rng, x, box, cfg.nearby_sigma)
                 : uniform_point(rng, box);
  // Alpha is always drawn so the x/y stream is the same for every condition.
  const double alpha =
      draw_alpha(rng, cfg.alpha_strategy.value_or(default_alpha_strategy(cond)));
  if (in_excluded_ball(f, x) || in_excluded_ball(f, y)) return std::nullopt;
  ConditionInstance inst{cond, f, L, std::move(x), std::move(y), std::nullopt};
  if (requires_alpha(cond)) inst.alpha = alpha;
  return inst;
}

Verdict falsify(ConditionId cond, const FunctionHandle& f, double L,
                const SampleConfig& cfg) {
  cfg.validate();
  if (requires_L(cond) && (!(L > 0.0) || !std::isfinite(L))) {
    throw ConfigError(std::string(to_string(cond)) + " requires L > 0");
  }
  const Box box = effective_box(f, cfg);
  const ToleranceMode& tol = cfg.tolerance;

  std::vector<SampleOutcome> outcomes(cfg.n_samples);
  detail::parallel_for(cfg.n_samples, cfg.workers, [&](std::size_t i) {
    auto inst = sample_instance(cond, f, L, cfg, i);
    if (!inst) return;
    try {
      const Residual r = evaluate(*inst);
      outcomes[i] = SampleOutcome{false, !tol.accept(r.value, r.scale()), r.value};
    } catch (const Error&) {
    }
  });

  std::size_t n_checked = 0;
  std::size_t n_skipped = 0;
  std::optional<std::size_t> worst_index;
  std::optional<std::size_t> violator_index;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    if (o.skipped) {
      ++n_skipped;
      continue;
    }
    ++n_checked;
    if (!worst_index || o.residual > outcomes[*worst_index].residual) {
      worst_index = i;
    }
    if (o.violates &&
        (!violator_index || o.residual > outcomes[*violator_index].residual)) {
      violator_index = i;
    }
  }
  if (2 * n_skipped > cfg.n_samples) {
    throw ConfigError(std::string(to_string(cond)) + " on " + f.name() + ": " +
                      std::to_string(n_skipped) + " of " +
                      std::to_string(cfg.n_samples) +
                      " samples could not be evaluated");
  }
  const double worst = outcomes[*worst_index].residual;

  auto make_verdict = [&](auto outcome) {
    return Verdict{cond,      L,     cfg.n_samples,     n_checked,
                   n_skipped, worst, std::move(outcome)};
  };
  if (violator_index) {
    ConditionInstance inst = *sample_instance(cond, f, L, cfg, *violator_index);
    ShrinkResult shrunk = shrink_counterexample(inst, tol, box);
    const double shrunk_residual = residual(shrunk.instance);
    return make_verdict(Counterexample{std::move(inst),
                                       outcomes[*violator_index].residual,
                                       std::move(shrunk.instance),
                                       shrunk_residual, shrunk.steps});
  }
  return make_verdict(
      NoCounterexample{worst, *sample_instance(cond, f, L, cfg, *worst_index)});
}

ShrinkResult shrink_counterexample(const ConditionInstance& inst,
                                   const ToleranceMode& tol,
                                   const std::optional<Box>& box_override) {
  ShrinkResult out{inst, 0};
  if (!violation(inst, tol)) return out;

  const Box box = box_override ? *box_override : inst.f.box();
  const Vector center = box_center(box);
  constexpr double kFractions[] = {1.0, 0.5, 0.25, 0.125};

  // Tries a replacement for one coordinate of x (slot 0) or y (slot 1).
  auto try_coordinate = [&](int slot, std::size_t i) {
    const Vector& v = slot == 0 ? out.instance.x : out.instance.y;
    const double current = v[i];
    const double target = center[i];
    const double min_move = 1e-9 * box[i].width();
    if (std::abs(target - current) <= min_move) return false;
    for (double frac : kFractions) {
      const double moved = frac == 1.0 ? target : current + frac * (target - current);
      if (std::abs(moved - current) <= min_move) break;
      std::vector<double> coords(v.values());
      coords[i] = moved;
      ConditionInstance cand = out.instance;
      (slot == 0 ? cand.x : cand.y) = Vector(std::move(coords));
      if (violation(cand, tol)) {
        out.instance = std::move(cand);
        ++out.steps;
        return true;
      }
    }
    return false;
  };

  auto try_alpha = [&] {
    if (!out.instance.alpha || *out.instance.alpha == 0.5) return false;
    const double a = *out.instance.alpha;
    for (double moved : {0.5, a + 0.5 * (0.5 - a)}) {
      if (moved == a) continue;
      ConditionInstance cand = out.instance;
      cand.alpha = moved;
      if (violation(cand, tol)) {
        out.instance = std::move(cand);
        ++out.steps;
        return true;
      }
    }
    return false;
  };

  bool progress = true;
  while (progress && out.steps < kMaxShrinkSteps) {
    progress = false;
    for (int slot = 0; slot < 2; ++slot) {
      for (std::size_t i = 0; i < center.dim(); ++i) {
        if (out.steps >= kMaxShrinkSteps) return out;
        progress |= try_coordinate(slot, i);
      }
    }
    if (out.steps < kMaxShrinkSteps) progress |= try_alpha();
  }
  return out;
}

ConditionInstance shrink(const ConditionInstance& inst, const ToleranceMode& tol,
                         const std::optional<Box>& box) {
  return shrink_counterexample(inst, tol, box).instance;
}

bool SuiteReport::all_passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

// ---------------------------------------------------------------------------
// Axiom and identity suites

namespace {

struct GapTracker {
  std::string name;
  double worst = 0.0;
  std::size_t n = 0;

  void record(double gap) {
    // NaN must fail the check, so it is mapped to +inf.
    if (std::isnan(gap)) gap = std::numeric_limits<double>::infinity();
    worst = std::max(worst, gap);
    ++n;
  }

  CheckResult result(double limit) const { return {name, worst <= limit, worst, n}; }
};

double abs_sum_products(const Vector& u, const Vector& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.dim(); ++i) s += std::abs(u[i] * v[i]);
  return s;
}

double rel(double gap, double scale) { return gap / std::max(1.0, scale); }

}  // namespace

SuiteReport axiom_suite(const SampleConfig& cfg) {
  cfg.validate();
  GapTracker homogeneity{"inner_product_homogeneity"};
  GapTracker additivity{"inner_product_additivity"};
  GapTracker symmetry{"inner_product_symmetry"};
  GapTracker positivity{"inner_product_positivity"};
  GapTracker cauchy{"cauchy_schwarz"};
  GapTracker definiteness{"metric_definiteness"};
  GapTracker metric_sym{"metric_symmetry"};
  GapTracker triangle{"metric_triangle"};

  for (std::size_t dim : kAxiomDims) {
    const Box box = default_box(dim);
    const std::uint64_t seed = derive_seed(cfg.seed, dim);
    for (std::size_t i = 0; i < cfg.n_samples; ++i) {
      CounterRng rng(seed, i);
      const Vector u = uniform_point(rng, box);
      const Vector v = uniform_point(rng, box);
      const Vector w = uniform_point(rng, box);
      const double a = rng.uniform(-kDefaultBoxHalfWidth, kDefaultBoxHalfWidth);
      const double uv = dot(u, v);

      homogeneity.record(rel(std::abs(dot(scalar_mul(a, u), v) - a * uv),
                             std::abs(a) * abs_sum_products(u, v)));

      additivity.record(
          rel(std::abs(dot(vec_add(u, v), w) - dot(u, w) - dot(v, w)),
              abs_sum_products(u, w) + abs_sum_products(v, w)));

      symmetry.record(rel(std::abs(uv - dot(v, u)), abs_sum_products(u, v)));

      {
        const double uu = dot(u, u);
        const bool is_zero = std::all_of(u.begin(), u.end(),
                                         [](double c) { return c == 0.0; });
        double gap = std::max(0.0, -uu);
        if (is_zero != (uu == 0.0)) gap = std::numeric_limits<double>::infinity();
        const double n = eu_norm(u);
        gap = std::max(gap, rel(std::abs(norm_sq(u) - n * n), uu));
        const Vector zero = Vector::zeros(dim);
        gap = std::max(gap, std::abs(dot(zero, zero)));
        positivity.record(gap);
      }

      {
        const double bound = eu_norm(u) * eu_norm(v);
        double gap = rel(std::max(0.0, -cauchy_schwarz_gap(u, v)), bound);
        // Equality case: v parallel to u.
        const Vector par = scalar_mul(a, u);
        gap = std::max(gap, rel(std::abs(cauchy_schwarz_gap(u, par)),
                                eu_norm(u) * eu_norm(par)));
        cauchy.record(gap);
      }

      {
        const double dxy = eu_metric(u, v);
        double gap = std::abs(eu_metric(u, u));
        if (u != v && !(dxy > 0.0)) gap = std::numeric_limits<double>::infinity();
        gap = std::max(gap, std::max(0.0, -dxy));
        gap = std::max(gap, rel(std::abs(metric_sq(u, v) - dxy * dxy), dxy * dxy));
        definiteness.record(gap);
      }

      {
        const double dxy = eu_metric(u, v);
        metric_sym.record(rel(std::abs(dxy - eu_metric(v, u)), dxy));
      }

      {
        const double via = eu_metric(u, w) + eu_metric(w, v);
        triangle.record(rel(std::max(0.0, eu_metric(u, v) - via), via));
      }
    }
  }

  const double limit = cfg.tolerance.abs_tol;
  SuiteReport report{"axioms", {}};
  for (const GapTracker* t : {&homogeneity, &additivity, &symmetry, &positivity,
                              &cauchy, &definiteness, &metric_sym, &triangle}) {
    report.checks.push_back(t->result(limit));
  }
  return report;
}

SuiteReport identity_suite(const SampleConfig& cfg) {
  cfg.validate();
  const ToleranceMode& tol = cfg.tolerance;
  const AlphaStrategy alpha_strategy =
      cfg.alpha_strategy.value_or(AlphaStrategy::EndpointsPlusUniform);

  GapTracker square{"square_identity"};
  {
    const std::uint64_t seed = derive_seed(cfg.seed, 14);
    for (std::size_t i = 0; i < cfg.n_samples; ++i) {
      CounterRng rng(seed, i);
      const double x = rng.uniform(-kDefaultBoxHalfWidth, kDefaultBoxHalfWidth);
      const double y = rng.uniform(-kDefaultBoxHalfWidth, kDefaultBoxHalfWidth);
      const double a = draw_alpha(rng, alpha_strategy);
      square.record(std::abs(square_identity_gap(x, y, a)));
    }
  }

  // Recorded as -gap: the lemma is violated when the gap is negative.
  GapTracker lemma{"norm_lemma"};
  {
    const Box box = default_box(3);
    const std::uint64_t seed = derive_seed(cfg.seed, 16);
    for (std::size_t i = 0; i < cfg.n_samples; ++i) {
      CounterRng rng(seed, i);
      const Vector x = uniform_point(rng, box);
      const Vector y = uniform_point(rng, box);
      const double a = draw_alpha(rng, alpha_strategy);
      lemma.record(std::max(0.0, -norm_lemma_gap(x, y, a)));
    }
  }

  // Both steps of the chain, on functions whose Lipschitz bound holds at L.
  GapTracker chain_lip{"chain_lipschitz_step"};
  GapTracker chain_cs{"chain_cauchy_schwarz_step"};
  {
    const std::uint64_t seed = derive_seed(cfg.seed, 20);
    const std::pair<FunctionHandle, double> cases[] = {
        {catalog::norm_sq_fn(3), 2.0},
        {catalog::diag_quadratic({1.0, 5.0}), 10.0},
        {catalog::const_fn(2), 1.0},
    };
    for (const auto& [f, L] : cases) {
      const Box box = f.box();
      for (std::size_t i = 0; i < cfg.n_samples; ++i) {
        CounterRng rng(seed, i);
        const Vector x = uniform_point(rng, box);
        const Vector y = uniform_point(rng, box);
        const ChainGaps g = chain_0_implies_4_gap(f, L, x, y, tol);
        const double scale = std::max(1.0, L * metric_sq(x, y));
        // A negative gap beyond the tolerance is recorded as a positive excess.
        chain_cs.record(std::max(0.0, -g.cauchy_schwarz_gap - tol.threshold(scale)));
        if (g.applicable) {
          chain_lip.record(std::max(0.0, -g.lipschitz_gap - tol.threshold(scale)));
        }
      }
    }
  }

  const double limit = tol.abs_tol;
  SuiteReport report{"identities", {}};
  report.checks.push_back(square.result(limit));
  report.checks.push_back(lemma.result(limit));
  report.checks.push_back(chain_lip.result(0.0));
  report.checks.push_back(chain_cs.result(0.0));
  return report;
}

CheckResult check_compose_preconditions(const FunctionHandle& composed,
                                        const SampleConfig& cfg) {
  cfg.validate();
  if (!composed.composition()) {
    throw ConfigError(composed.name() + " is not a compose_mono result");
  }
  const FunctionHandle& outer = *composed.composition()->outer;
  const FunctionHandle& inner = *composed.composition()->inner;
  const Box box = effective_box(composed, cfg);

  std::vector<double> range;
  range.reserve(cfg.n_samples);
  for (std::size_t i = 0; i < cfg.n_samples; ++i) {
    CounterRng rng(derive_seed(cfg.seed, 3), i);
    try {
      range.push_back(inner.eval_unchecked(uniform_point(rng, box)));
    } catch (const Error&) {
    }
  }
  std::sort(range.begin(), range.end());

  GapTracker t{"compose_outer_monotone_convex"};
  const ToleranceMode& tol = cfg.tolerance;
  auto h = [&](double s) { return outer.eval_unchecked(Vector{s}); };
  for (std::size_t i = 0; i + 1 < range.size(); ++i) {
    const double lo = h(range[i]);
    const double hi = h(range[i + 1]);
    const double drop = lo - hi;
    t.record(std::max(0.0, drop - tol.threshold(ToleranceMode::side_scale(lo, hi))));
  }
  for (std::size_t i = 0; i < range.size(); ++i) {
    CounterRng rng(derive_seed(cfg.seed, 4), i);
    const double s = range[i];
    const double r = range[rng.below(range.size())];
    const double a = rng.uniform(0.0, 1.0);
    const double lhs = h(a * s + (1.0 - a) * r);
    const double rhs = a * h(s) + (1.0 - a) * h(r);
    t.record(std::max(0.0, lhs - rhs - tol.threshold(ToleranceMode::side_scale(lhs, rhs))));
  }
  return t.result(0.0);
}

}  // namespace smoothcert
