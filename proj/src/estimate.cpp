#include "smoothcert/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "numfmt.hpp"
#include "parallel.hpp"
#include "smoothcert/errors.hpp"
#include "smoothcert/rng.hpp"

namespace smoothcert {

using detail::format_real;

namespace {

struct PairOutcome {
  bool skipped = true;
  double quotient = 0.0;
};

constexpr std::uint64_t kNearbySalt = 0x6e656172ULL;
constexpr std::uint64_t kFreshSeedSalt = 0x66726573ULL;

SampleConfig pair_config(const SampleConfig& cfg, std::size_t index) {
  SampleConfig c = cfg;
  if (index < cfg.n_samples) {
    c.pair_strategy = PairStrategy::Independent;
  } else {
    c.pair_strategy = PairStrategy::Nearby;
    c.seed = derive_seed(cfg.seed, kNearbySalt);
  }
  return c;
}

std::optional<ConditionInstance> pair_at(const FunctionHandle& f,
                                         const SampleConfig& cfg,
                                         std::size_t index) {
  const std::size_t local = index < cfg.n_samples ? index : index - cfg.n_samples;
  return sample_instance(ConditionId::Nest0, f, 1.0, pair_config(cfg, index),
                         local);
}

}  // namespace

LEstimate estimate_L(const FunctionHandle& f, const SampleConfig& cfg) {
  cfg.validate();
  const std::size_t total = 2 * cfg.n_samples;
  std::vector<PairOutcome> outcomes(total);
  detail::parallel_for(total, cfg.workers, [&](std::size_t i) {
    auto inst = pair_at(f, cfg, i);
    if (!inst) return;
    try {
      const double dx = eu_metric(inst->x, inst->y);
      if (dx < kMinPairDistance) return;
      const double dg = eu_metric(f.grad(inst->x), f.grad(inst->y));
      outcomes[i] = PairOutcome{false, dg / dx};
    } catch (const Error&) {
    }
  });

  std::optional<std::size_t> best;
  std::size_t n_pairs = 0;
  for (std::size_t i = 0; i < total; ++i) {
    if (outcomes[i].skipped) continue;
    ++n_pairs;
    if (!best || outcomes[i].quotient > outcomes[*best].quotient) best = i;
  }
  if (!best) {
    throw ConfigError("estimate_L on " + f.name() + ": every sampled pair was skipped");
  }
  auto inst = pair_at(f, cfg, *best);
  return LEstimate{outcomes[*best].quotient, n_pairs, inst->x, inst->y};
}

MinimalL minimal_L(ConditionId cond, const FunctionHandle& f,
                   const SampleConfig& cfg, Bracket bracket) {
  if (!requires_L(cond)) {
    throw ConfigError(std::string(to_string(cond)) + " does not depend on L");
  }
  if (!(bracket.lo > 0.0) || !(bracket.lo < bracket.hi) ||
      !std::isfinite(bracket.hi)) {
    throw BracketError("minimal_L: bracket (" + format_real(bracket.lo) + ", " +
                       format_real(bracket.hi) + ") must satisfy 0 < lo < hi");
  }

  MinimalL out;
  auto holds = [&](double L, const SampleConfig& c) {
    ++out.probes;
    return !falsify(cond, f, L, c).falsified();
  };

  if (!holds(bracket.hi, cfg)) {
    throw BracketError("minimal_L: " + std::string(to_string(cond)) +
                       " is falsified at the upper end L = " +
                       format_real(bracket.hi));
  }

  double lo = bracket.lo;
  double hi = bracket.hi;
  if (holds(lo, cfg)) {
    out.at_lower_end = true;
    hi = lo;
  } else {
    // Invariant: fails at lo, holds at hi.
    for (int iter = 0; iter < 200 && lo < hi * (1.0 - kMinimalLRelTol); ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (holds(mid, cfg)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
  }
  out.value = hi;

  SampleConfig fresh = cfg;
  fresh.seed = derive_seed(cfg.seed, kFreshSeedSalt);
  out.fresh_seed_holds = holds(out.value, fresh);
  return out;
}

const Verdict& DagReport::verdict(ConditionId id) const {
  for (const auto& v : verdicts) {
    if (v.cond == id) return v;
  }
  throw ConfigError("no verdict for " + std::string(to_string(id)));
}

bool DagReport::gate_passed() const noexcept {
  return convexity_gate && !convexity_gate->falsified();
}

bool DagReport::all_hold() const noexcept {
  return std::none_of(verdicts.begin(), verdicts.end(),
                      [](const Verdict& v) { return v.falsified(); });
}

bool DagReport::all_falsified() const noexcept {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const Verdict& v) { return v.falsified(); });
}

bool DagReport::equivalence_verified() const noexcept {
  return gate_passed() && all_hold() && discrepancies.empty();
}

std::string DagReport::summary() const {
  std::string s;
  if (!gate_passed()) {
    s += "convexity gate failed (convex0 falsified";
    if (convexity_gate) {
      s += ", worst residual " + format_real(convexity_gate->worst_residual);
    }
    s += "); equivalence not applicable; ";
  }
  if (discrepancies.empty()) {
    s += all_hold() ? "all seven agree: holds" : "all seven agree: falsified";
  } else {
    s += "discrepancies:";
    for (std::size_t i = 0; i < discrepancies.size(); ++i) {
      const auto& d = discrepancies[i];
      s += (i ? ", " : " ") + std::string(to_string(d.edge.from)) + "->" +
           std::string(to_string(d.edge.to)) + " (source worst " +
           format_real(d.source_worst_residual) + ", target worst " +
           format_real(d.target_worst_residual) + ")";
    }
  }
  if (equivalence_verified()) s += "; Nesterov-equivalence verified";
  return s;
}

DagReport equivalence_report(const FunctionHandle& f, double L,
                             const SampleConfig& cfg) {
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw ConfigError("equivalence_report: L must be finite and > 0");
  }
  DagReport report;
  report.L = L;
  report.edges.assign(kImplicationEdges.begin(), kImplicationEdges.end());
  for (ConditionId id : kNesterovConditions) {
    report.verdicts.push_back(falsify(id, f, L, cfg));
  }
  report.convexity_gate = falsify(ConditionId::Convex0, f, L, cfg);

  for (const DagEdge& e : report.edges) {
    const Verdict& src = report.verdict(e.from);
    const Verdict& dst = report.verdict(e.to);
    if (!src.falsified() && dst.falsified()) {
      report.discrepancies.push_back({e, src.worst_residual, dst.worst_residual});
    }
  }
  return report;
}

double equivalence_L(const LEstimate& est) noexcept {
  return std::max(kEquivalenceMargin * est.L_hat, kMinEquivalenceL);
}

}  // namespace smoothcert
