#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "smoothcert/checker.hpp"
#include "smoothcert/conditions.hpp"
#include "smoothcert/funcs.hpp"

namespace smoothcert {

/// Empirical Lipschitz constant of the gradient: the largest difference
/// quotient ||g(x) - g(y)|| / ||x - y|| seen over the sampled pairs.
struct LEstimate {
  double L_hat = 0.0;
  std::size_t n_pairs = 0;
  Vector argmax_x;
  Vector argmax_y;
};

// Pairs closer than this are skipped by estimate_L.
inline constexpr double kMinPairDistance = 1e-9;

// Samples cfg.n_samples independent pairs and cfg.n_samples nearby pairs and
// keeps the maximum quotient. Throws ConfigError when no pair is usable.
LEstimate estimate_L(const FunctionHandle& f, const SampleConfig& cfg);

struct Bracket {
  double lo = 1e-3;
  double hi = 1e3;
};

inline constexpr double kMinimalLRelTol = 1e-3;

struct MinimalL {
  double value = 0.0;
  std::size_t probes = 0;
  // The condition already held at bracket.lo, so no bisection happened.
  bool at_lower_end = false;
  // Re-check at `value` with a seed derived from cfg.seed.
  bool fresh_seed_holds = false;
};

/// Bisects L over the bracket on a fixed sample set (cfg.seed for every
/// probe). The result holds at `value` and fails at value * (1 - 1e-3).
/// Throws BracketError when the condition fails at bracket.hi or the bracket
/// is malformed, and ConfigError for the convexity conditions.
MinimalL minimal_L(ConditionId cond, const FunctionHandle& f,
                   const SampleConfig& cfg, Bracket bracket = {});

struct DagEdge {
  ConditionId from;
  ConditionId to;

  bool operator==(const DagEdge&) const = default;
};

// 0 -> 4 -> 1 -> 2 -> 3 -> 0, plus 1 <-> 6 and 2 <-> 5.
inline constexpr std::array<DagEdge, 9> kImplicationEdges{{
    {ConditionId::Nest0, ConditionId::Nest4},
    {ConditionId::Nest4, ConditionId::Nest1},
    {ConditionId::Nest1, ConditionId::Nest2},
    {ConditionId::Nest2, ConditionId::Nest3},
    {ConditionId::Nest3, ConditionId::Nest0},
    {ConditionId::Nest1, ConditionId::Nest6},
    {ConditionId::Nest6, ConditionId::Nest1},
    {ConditionId::Nest2, ConditionId::Nest5},
    {ConditionId::Nest5, ConditionId::Nest2},
}};

struct Discrepancy {
  DagEdge edge;
  double source_worst_residual;
  double target_worst_residual;
};

struct DagReport {
  double L = 0.0;
  std::vector<Verdict> verdicts;  // nest0..nest6 in order
  std::vector<DagEdge> edges;
  std::vector<Discrepancy> discrepancies;
  // convex0 on the same samples; the equivalence only applies to convex f.
  std::optional<Verdict> convexity_gate;

  const Verdict& verdict(ConditionId id) const;
  bool gate_passed() const noexcept;
  bool all_hold() const noexcept;
  bool all_falsified() const noexcept;
  // Gate passed, every verdict holds, no discrepancies.
  bool equivalence_verified() const noexcept;
  std::string summary() const;
};

DagReport equivalence_report(const FunctionHandle& f, double L,
                             const SampleConfig& cfg);

// L used when none is given: 1.05 * L_hat, floored at kMinEquivalenceL so
// functions with constant gradient still get a valid L.
inline constexpr double kEquivalenceMargin = 1.05;
inline constexpr double kMinEquivalenceL = 1e-3;
double equivalence_L(const LEstimate& est) noexcept;

}  // namespace smoothcert
