#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "smoothcert/checker.hpp"
#include "smoothcert/report.hpp"

namespace smoothcert::cli {

enum class Command { Axioms, Check, Estimate, Equiv, Identities };
enum class OutputFormat { Text, Json };

std::string_view to_string(Command c) noexcept;

inline constexpr int kExitOk = 0;
inline constexpr int kExitCounterexample = 1;
inline constexpr int kExitUsage = 2;

struct RunSpec {
  Command command = Command::Check;
  std::string fn_spec = "norm2";
  std::size_t dim = 2;
  std::optional<ConditionId> cond;
  std::optional<double> L;
  std::uint64_t seed = 0;
  std::size_t n_samples = 10000;
  // Applied to every coordinate.
  std::optional<Interval> box;
  std::optional<AlphaStrategy> alpha_strategy;
  PairStrategy pair_strategy = PairStrategy::Independent;
  std::optional<double> fd_step;
  unsigned workers = 1;
  OutputFormat output = OutputFormat::Text;
  std::optional<std::string> output_path;
  std::optional<std::string> replay_path;
};

struct RunResult {
  int exit_code = kExitOk;
  json document;
};

// Executes the command and builds the report document. Never throws for
// configuration problems: they become exit code 2 with the message in
// document["errors"].
RunResult run(const RunSpec& spec);

// Re-evaluates every counterexample stored in a report document from its
// serialized coordinates. Exit 0 when all of them reproduce.
RunResult replay(const json& document);

std::string render_text(const json& document);

// run() + render, written to spec.output_path or `out`.
int run_and_emit(const RunSpec& spec, std::ostream& out, std::ostream& err);

// Parses "lo:hi".
Interval parse_box(std::string_view text);

}  // namespace smoothcert::cli
