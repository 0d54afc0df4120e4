#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "smoothcert/conditions.hpp"
#include "smoothcert/funcs.hpp"
#include "smoothcert/tolerance.hpp"

namespace smoothcert {

enum class AlphaStrategy {
  Uniform01,
  EndpointsPlusUniform,  // 0 and 1 each with probability 1/8
  NearZero,              // 10^-k, k uniform in 1..6
};

enum class PairStrategy {
  Independent,
  Nearby,  // y = x + sigma * N(0, I), clamped to the box
};

std::string_view to_string(AlphaStrategy s) noexcept;
AlphaStrategy parse_alpha_strategy(std::string_view name);
std::string_view to_string(PairStrategy s) noexcept;
PairStrategy parse_pair_strategy(std::string_view name);

struct SampleConfig {
  std::uint64_t seed = 0;
  std::size_t n_samples = 10000;
  // Overrides the function's domain box when set.
  std::optional<Box> box;
  // Unset: EndpointsPlusUniform for nest5/nest6, Uniform01 otherwise.
  std::optional<AlphaStrategy> alpha_strategy;
  PairStrategy pair_strategy = PairStrategy::Independent;
  // Per-coordinate sigma for Nearby; unset means 0.1 * box width.
  std::optional<double> nearby_sigma;
  ToleranceMode tolerance;
  unsigned workers = 1;

  void validate() const;
};

AlphaStrategy default_alpha_strategy(ConditionId cond) noexcept;
Box effective_box(const FunctionHandle& f, const SampleConfig& cfg);

struct NoCounterexample {
  double worst_residual;
  ConditionInstance worst_instance;
};

struct Counterexample {
  ConditionInstance instance;
  double residual;
  ConditionInstance shrunk_instance;
  double shrunk_residual;
  std::size_t shrink_steps = 0;
};

struct Verdict {
  ConditionId cond;
  double L;
  std::size_t n_samples = 0;
  std::size_t n_checked = 0;
  std::size_t n_skipped = 0;
  // Largest residual over every checked sample.
  double worst_residual = 0.0;
  std::variant<NoCounterexample, Counterexample> outcome;

  bool falsified() const noexcept {
    return std::holds_alternative<Counterexample>(outcome);
  }
  const Counterexample* counterexample() const noexcept {
    return std::get_if<Counterexample>(&outcome);
  }
};

// Sample i of the stream for (cfg.seed, f's box). Returns nullopt when the
// sample lands in the function's excluded ball.
std::optional<ConditionInstance> sample_instance(ConditionId cond,
                                                 const FunctionHandle& f,
                                                 double L,
                                                 const SampleConfig& cfg,
                                                 std::size_t index);

/// Evaluates cond on all cfg.n_samples samples. If any sample violates the
/// condition, the violator with the largest residual is shrunk and reported.
/// Samples whose evaluation raises a library error are skipped; more than
/// half skipped is a ConfigError.
Verdict falsify(ConditionId cond, const FunctionHandle& f, double L,
                const SampleConfig& cfg);

inline constexpr std::size_t kMaxShrinkSteps = 200;

struct ShrinkResult {
  ConditionInstance instance;
  std::size_t steps = 0;
};

// Greedy shrink toward the box center: each coordinate of x then y is moved
// all, half, a quarter, or an eighth of the way to the center, and alpha is
// pulled toward 1/2, keeping only moves that still violate. Returns the input
// unchanged when it does not violate.
ShrinkResult shrink_counterexample(const ConditionInstance& inst,
                                   const ToleranceMode& tol = {},
                                   const std::optional<Box>& box = std::nullopt);
ConditionInstance shrink(const ConditionInstance& inst,
                         const ToleranceMode& tol = {},
                         const std::optional<Box>& box = std::nullopt);

struct CheckResult {
  std::string name;
  bool passed = true;
  double worst_gap = 0.0;
  std::size_t n_checked = 0;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool all_passed() const noexcept;
};

inline constexpr std::array<std::size_t, 5> kAxiomDims{1, 2, 3, 5, 10};

// Inner-product axioms, Cauchy-Schwarz and metric axioms on cfg.n_samples
// random tuples per dimension in kAxiomDims. Gaps are normalised by the
// magnitude of the compared quantities; a check passes when its worst gap is
// at most tolerance.abs_tol.
SuiteReport axiom_suite(const SampleConfig& cfg);

// The square-function identity, the norm lemma (dim 3) and the two steps of
// the Lipschitz => nest4 chain on catalog quadratics.
SuiteReport identity_suite(const SampleConfig& cfg);

// Spot-checks the trusted assumptions of compose_mono on samples of the inner
// function's range: the outer function is nondecreasing and convex there.
CheckResult check_compose_preconditions(const FunctionHandle& composed,
                                        const SampleConfig& cfg);

}  // namespace smoothcert
