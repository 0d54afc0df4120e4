// smoothcert: falsify and cross-check smoothness/convexity inequalities.
//
//   smoothcert check --fn neg_norm2 --dim 2 --cond convex0 --seed 7
//   smoothcert equiv --fn norm2 --dim 2 --L 2 --json
//   smoothcert check --replay report.json

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "smoothcert/cli.hpp"
#include "smoothcert/errors.hpp"

namespace sc = smoothcert;
namespace cli = smoothcert::cli;

namespace {

struct RawFlags {
  std::string fn = "norm2";
  std::size_t dim = 2;
  std::string cond;
  double L = 0.0;
  std::uint64_t seed = 0;
  std::size_t samples = 10000;
  std::string box;
  std::string alpha_strategy;
  std::string pair_strategy = "independent";
  double fd_step = 0.0;
  unsigned threads = 1;
  bool json = false;
  std::string out;
  std::string replay;
};

void add_common(CLI::App* sub, RawFlags& f, bool with_function) {
  if (with_function) {
    sub->add_option("--fn", f.fn, "function spec, e.g. 'scale(2, sum(norm2, diagq(1,5)))'");
    sub->add_option("--dim", f.dim, "dimension n of the domain R^n")->check(CLI::PositiveNumber);
    sub->add_option("--box", f.box, "domain box lo:hi applied to every coordinate");
    sub->add_option("--fd-step", f.fd_step, "central-difference step for FD gradients");
  }
  sub->add_option("--seed", f.seed, "sampling seed");
  sub->add_option("--samples", f.samples, "number of samples")->check(CLI::PositiveNumber);
  sub->add_option("--alpha-strategy", f.alpha_strategy,
                  "uniform01 | endpoints_plus_uniform | near_zero");
  sub->add_option("--threads", f.threads, "sampling worker threads")->check(CLI::PositiveNumber);
  sub->add_flag("--json", f.json, "emit the JSON report");
  sub->add_option("--out", f.out, "write the report to PATH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical certification of convexity and L-smoothness inequalities"};
  app.set_version_flag("--version", std::string(sc::kToolVersion));
  app.require_subcommand(1);

  RawFlags flags;
  auto* axioms = app.add_subcommand("axioms", "inner-product, Cauchy-Schwarz and metric axioms");
  auto* identities = app.add_subcommand("identities", "square identity, norm lemma, Lipschitz chain");
  auto* check = app.add_subcommand("check", "falsify one condition for one function");
  auto* estimate = app.add_subcommand("estimate", "estimate the gradient Lipschitz constant");
  auto* equiv = app.add_subcommand("equiv", "all seven conditions plus the implication graph");

  add_common(axioms, flags, false);
  add_common(identities, flags, false);
  for (auto* sub : {check, estimate, equiv}) add_common(sub, flags, true);
  check->add_option("--cond", flags.cond, "nest0..nest6 | convex0 | convex1");
  estimate->add_option("--cond", flags.cond, "condition for the minimal-L search (default nest0)");
  for (auto* sub : {check, equiv}) sub->add_option("--L", flags.L, "smoothness constant L > 0");
  check->add_option("--replay", flags.replay, "re-verify the counterexamples in a JSON report");
  for (auto* sub : {check, estimate}) {
    sub->add_option("--pair-strategy", flags.pair_strategy, "independent | nearby");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitUsage;
  }

  cli::RunSpec spec;
  try {
    if (axioms->parsed()) spec.command = cli::Command::Axioms;
    if (identities->parsed()) spec.command = cli::Command::Identities;
    if (check->parsed()) spec.command = cli::Command::Check;
    if (estimate->parsed()) spec.command = cli::Command::Estimate;
    if (equiv->parsed()) spec.command = cli::Command::Equiv;

    CLI::App* sub = app.get_subcommands().front();
    spec.fn_spec = flags.fn;
    spec.dim = flags.dim;
    if (!flags.cond.empty()) spec.cond = sc::parse_condition(flags.cond);
    auto given = [sub](const std::string& name) {
      const CLI::Option* opt = sub->get_option_no_throw(name);
      return opt != nullptr && opt->count() > 0;
    };
    if (given("--L")) spec.L = flags.L;
    spec.seed = flags.seed;
    spec.n_samples = flags.samples;
    if (!flags.box.empty()) spec.box = cli::parse_box(flags.box);
    if (!flags.alpha_strategy.empty()) {
      spec.alpha_strategy = sc::parse_alpha_strategy(flags.alpha_strategy);
    }
    spec.pair_strategy = sc::parse_pair_strategy(flags.pair_strategy);
    if (given("--fd-step")) spec.fd_step = flags.fd_step;
    spec.workers = flags.threads;
    spec.output = flags.json ? cli::OutputFormat::Json : cli::OutputFormat::Text;
    if (!flags.out.empty()) spec.output_path = flags.out;
    if (!flags.replay.empty()) spec.replay_path = flags.replay;
  } catch (const sc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitUsage;
  }

  return cli::run_and_emit(spec, std::cout, std::cerr);
}
