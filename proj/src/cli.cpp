#include "smoothcert/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "numfmt.hpp"
#include "smoothcert/errors.hpp"
#include "smoothcert/fnspec.hpp"

namespace smoothcert::cli {

using detail::format_real;

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::Axioms: return "axioms";
    case Command::Check: return "check";
    case Command::Estimate: return "estimate";
    case Command::Equiv: return "equiv";
    case Command::Identities: return "identities";
  }
  return "unknown";
}

Interval parse_box(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("box must be written lo:hi, got '" + std::string(text) + "'");
  }
  auto number = [&](std::string_view s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(std::string(s), &used);
      if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("box bound '" + std::string(s) + "' is not a finite number");
    }
  };
  Interval iv{number(text.substr(0, colon)), number(text.substr(colon + 1))};
  if (!(iv.lo < iv.hi)) throw ConfigError("box requires lo < hi");
  return iv;
}

namespace {

json echo(const RunSpec& s) {
  return {
      {"command", to_string(s.command)},
      {"fn", s.fn_spec},
      {"dim", s.dim},
      {"cond", s.cond ? json(smoothcert::to_string(*s.cond)) : json(nullptr)},
      {"L", s.L ? json(*s.L) : json(nullptr)},
      {"seed", s.seed},
      {"samples", s.n_samples},
      {"box", s.box ? json({s.box->lo, s.box->hi}) : json(nullptr)},
      {"alpha_strategy",
       s.alpha_strategy ? json(smoothcert::to_string(*s.alpha_strategy)) : json(nullptr)},
      {"pair_strategy", smoothcert::to_string(s.pair_strategy)},
      {"fd_step", s.fd_step ? json(*s.fd_step) : json(nullptr)},
  };
}

FunctionHandle build_function(const std::string& fn, std::size_t dim,
                              const std::optional<Interval>& box,
                              const std::optional<double>& fd_step) {
  FunctionHandle f = parse_fn_spec(fn, dim);
  if (box) f = f.with_box(Box(dim, *box));
  if (fd_step) f = f.with_fd_step(*fd_step);
  return f;
}

SampleConfig build_config(const RunSpec& s) {
  SampleConfig cfg;
  cfg.seed = s.seed;
  cfg.n_samples = s.n_samples;
  cfg.alpha_strategy = s.alpha_strategy;
  cfg.pair_strategy = s.pair_strategy;
  cfg.workers = s.workers;
  return cfg;
}

void attach_compose_check(json& doc, const FunctionHandle& f,
                          const SampleConfig& cfg, bool& failed) {
  if (!f.composition()) return;
  const CheckResult c = check_compose_preconditions(f, cfg);
  doc["compose_preconditions"] = to_json(c);
  failed |= !c.passed;
}

int execute(const RunSpec& spec, json& doc) {
  const SampleConfig cfg = build_config(spec);
  switch (spec.command) {
    case Command::Axioms: {
      const SuiteReport s = axiom_suite(cfg);
      doc["suite"] = to_json(s);
      return s.all_passed() ? kExitOk : kExitCounterexample;
    }
    case Command::Identities: {
      const SuiteReport s = identity_suite(cfg);
      doc["suite"] = to_json(s);
      return s.all_passed() ? kExitOk : kExitCounterexample;
    }
    case Command::Check: {
      if (!spec.cond) throw ConfigError("check requires --cond (or --replay)");
      const FunctionHandle f =
          build_function(spec.fn_spec, spec.dim, spec.box, spec.fd_step);
      doc["function"] = describe_function(f);
      double L = 1.0;
      if (requires_L(*spec.cond)) {
        if (!spec.L) {
          throw ConfigError("check --cond " + std::string(smoothcert::to_string(*spec.cond)) +
                            " requires --L");
        }
        L = *spec.L;
      }
      const Verdict v = falsify(*spec.cond, f, L, cfg);
      doc["checks"] = json::array({to_json(v)});
      bool failed = v.falsified();
      attach_compose_check(doc, f, cfg, failed);
      return failed ? kExitCounterexample : kExitOk;
    }
    case Command::Estimate: {
      const FunctionHandle f =
          build_function(spec.fn_spec, spec.dim, spec.box, spec.fd_step);
      doc["function"] = describe_function(f);
      const LEstimate est = estimate_L(f, cfg);
      doc["l_estimate"] = to_json(est);
      const ConditionId cond = spec.cond.value_or(ConditionId::Nest0);
      Bracket bracket;
      bracket.hi = std::max(bracket.hi, 2.0 * est.L_hat);
      const MinimalL m = minimal_L(cond, f, cfg, bracket);
      json ml = to_json(m);
      ml["condition"] = smoothcert::to_string(cond);
      ml["bracket"] = {bracket.lo, bracket.hi};
      if (cond == ConditionId::Nest0) {
        // Both approximate the same constant; a gap means too few samples.
        ml["agrees_with_L_hat"] =
            est.L_hat > 0.0 ? std::abs(m.value - est.L_hat) <= 0.02 * est.L_hat
                            : m.at_lower_end;
      }
      doc["minimal_l"] = ml;
      return kExitOk;
    }
    case Command::Equiv: {
      const FunctionHandle f =
          build_function(spec.fn_spec, spec.dim, spec.box, spec.fd_step);
      doc["function"] = describe_function(f);
      double L = 0.0;
      if (spec.L) {
        L = *spec.L;
      } else {
        const LEstimate est = estimate_L(f, cfg);
        doc["l_estimate"] = to_json(est);
        L = equivalence_L(est);
      }
      doc["L_used"] = L;
      const DagReport r = equivalence_report(f, L, cfg);
      doc["dag_report"] = to_json(r);
      bool failed = !r.all_hold() || !r.gate_passed() || !r.discrepancies.empty();
      attach_compose_check(doc, f, cfg, failed);
      return failed ? kExitCounterexample : kExitOk;
    }
  }
  throw ConfigError("unknown command");
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void finish(RunResult& r, std::chrono::steady_clock::time_point t0) {
  r.document["exit_code"] = r.exit_code;
  r.document["status"] = r.exit_code == kExitOk                ? "passed"
                         : r.exit_code == kExitCounterexample ? "counterexample"
                                                              : "error";
  const auto dt = std::chrono::steady_clock::now() - t0;
  r.document["timing"] = {
      {"elapsed_ms", std::chrono::duration<double, std::milli>(dt).count()}};
}

}  // namespace

RunResult run(const RunSpec& spec) {
  const auto t0 = std::chrono::steady_clock::now();
  RunResult r;
  if (spec.replay_path) {
    try {
      r = replay(load_json_file(*spec.replay_path));
    } catch (const std::exception& e) {
      r.document["errors"] = json::array({e.what()});
      r.exit_code = kExitUsage;
    }
    r.document["tool"] = kToolName;
    r.document["tool_version"] = kToolVersion;
    r.document["run_spec"] = echo(spec);
    r.document["run_spec"]["replay"] = *spec.replay_path;
    if (!r.document.contains("errors")) r.document["errors"] = json::array();
    finish(r, t0);
    return r;
  }

  json& doc = r.document;
  doc["tool"] = kToolName;
  doc["tool_version"] = kToolVersion;
  doc["run_spec"] = echo(spec);
  doc["errors"] = json::array();
  try {
    r.exit_code = execute(spec, doc);
  } catch (const std::exception& e) {
    doc["errors"].push_back(e.what());
    r.exit_code = kExitUsage;
  }
  finish(r, t0);
  return r;
}

RunResult replay(const json& stored) {
  RunResult r;
  json entries = json::array();
  bool all_ok = true;

  const json& rs = stored.at("run_spec");
  std::optional<Interval> box;
  if (rs.contains("box") && !rs["box"].is_null()) {
    box = Interval{rs["box"][0].get<double>(), rs["box"][1].get<double>()};
  }
  std::optional<double> fd_step;
  if (rs.contains("fd_step") && !rs["fd_step"].is_null()) {
    fd_step = rs["fd_step"].get<double>();
  }
  const FunctionHandle f = build_function(rs.at("fn").get<std::string>(),
                                          rs.at("dim").get<std::size_t>(), box, fd_step);
  const ToleranceMode tol;

  std::vector<const json*> verdicts;
  if (stored.contains("checks")) {
    for (const auto& v : stored["checks"]) verdicts.push_back(&v);
  }
  if (stored.contains("dag_report")) {
    const json& dag = stored["dag_report"];
    for (const auto& v : dag.at("verdicts")) verdicts.push_back(&v);
    if (!dag["convexity_gate"].is_null()) verdicts.push_back(&dag["convexity_gate"]);
  }

  for (const json* v : verdicts) {
    if (!v->contains("counterexample")) continue;
    const ConditionId cond = parse_condition(v->at("condition").get<std::string>());
    const double L = (*v)["L"].is_null() ? 1.0 : (*v)["L"].get<double>();
    const json& ce = v->at("counterexample");
    for (const auto& [which, key] :
         {std::pair{"instance", "residual"}, std::pair{"shrunk_instance", "shrunk_residual"}}) {
      const json& ij = ce.at(which);
      ConditionInstance inst{cond, f, L, vector_from_json(ij.at("x")),
                             vector_from_json(ij.at("y")), std::nullopt};
      if (!ij["alpha"].is_null()) inst.alpha = ij["alpha"].get<double>();
      const double stored_residual = ce.at(key).get<double>();
      const Residual res = evaluate(inst);
      const double slack = 4.0 * std::numeric_limits<double>::epsilon() *
                           std::max({1.0, std::abs(stored_residual), res.scale()});
      const bool matches = std::abs(res.value - stored_residual) <= slack;
      const bool violates = !tol.accept(res.value, res.scale());
      all_ok &= matches && violates;
      entries.push_back({{"condition", smoothcert::to_string(cond)},
                         {"which", which},
                         {"stored_residual", stored_residual},
                         {"recomputed_residual", res.value},
                         {"matches", matches},
                         {"still_violates", violates}});
    }
  }

  r.document["replay"] = {{"counterexamples", entries},
                          {"n_counterexamples", entries.size()},
                          {"all_reproduced", all_ok}};
  r.exit_code = all_ok ? kExitOk : kExitCounterexample;
  return r;
}

namespace {

std::string fmt_vec(const json& arr) {
  std::string s = "(";
  for (std::size_t i = 0; i < arr.size(); ++i) {
    s += (i ? ", " : "") + format_real(arr[i].get<double>());
  }
  return s + ")";
}

std::string fmt_instance(const json& inst) {
  std::string s = "x=" + fmt_vec(inst["x"]) + " y=" + fmt_vec(inst["y"]);
  if (!inst["alpha"].is_null()) s += " alpha=" + format_real(inst["alpha"].get<double>());
  return s;
}

void render_verdict(std::ostringstream& os, const json& v) {
  os << "  " << v["condition"].get<std::string>();
  if (!v["L"].is_null()) os << "  L=" << format_real(v["L"].get<double>());
  os << "  " << (v["verdict"] == "holds" ? "holds" : "FALSIFIED") << "  checked "
     << v["n_checked"].get<std::size_t>() << "/" << v["n_samples"].get<std::size_t>()
     << "  worst residual " << format_real(v["worst_residual"].get<double>()) << "\n";
  if (v.contains("counterexample")) {
    const json& c = v["counterexample"];
    os << "    counterexample: " << fmt_instance(c["instance"]) << "  residual "
       << format_real(c["residual"].get<double>()) << "\n";
    os << "    shrunk (" << c["shrink_steps"].get<std::size_t>()
       << " steps): " << fmt_instance(c["shrunk_instance"]) << "  residual "
       << format_real(c["shrunk_residual"].get<double>()) << "\n";
  }
}

}  // namespace

std::string render_text(const json& doc) {
  std::ostringstream os;
  os << kToolName << " " << kToolVersion << ": "
     << doc["run_spec"].value("command", std::string("?")) << "\n";
  if (doc.contains("function")) {
    os << "function: " << doc["function"]["name"].get<std::string>() << " (dim "
       << doc["function"]["dim"].get<std::size_t>() << ")\n";
  }
  if (doc.contains("suite")) {
    for (const auto& c : doc["suite"]["checks"]) {
      os << "  " << c["name"].get<std::string>() << "  "
         << (c["passed"].get<bool>() ? "pass" : "FAIL") << "  worst gap "
         << format_real(c["worst_gap"].get<double>()) << "  ("
         << c["n_checked"].get<std::size_t>() << " checked)\n";
    }
  }
  if (doc.contains("checks")) {
    for (const auto& v : doc["checks"]) render_verdict(os, v);
  }
  if (doc.contains("l_estimate")) {
    const json& e = doc["l_estimate"];
    os << "L_hat = " << format_real(e["L_hat"].get<double>()) << " over "
       << e["n_pairs"].get<std::size_t>() << " pairs\n";
  }
  if (doc.contains("minimal_l")) {
    const json& m = doc["minimal_l"];
    os << "minimal L (" << m["condition"].get<std::string>()
       << ") = " << format_real(m["value"].get<double>()) << "  fresh seed "
       << (m["fresh_seed_holds"].get<bool>() ? "holds" : "FAILS");
    if (m.contains("agrees_with_L_hat")) {
      os << "  " << (m["agrees_with_L_hat"].get<bool>() ? "agrees with L_hat"
                                                         : "DISAGREES with L_hat");
    }
    os << "\n";
  }
  if (doc.contains("dag_report")) {
    const json& d = doc["dag_report"];
    os << "L = " << format_real(d["L"].get<double>()) << "\n";
    for (const auto& v : d["verdicts"]) render_verdict(os, v);
    if (!d["convexity_gate"].is_null()) {
      os << "  gate:\n";
      render_verdict(os, d["convexity_gate"]);
    }
    os << d["summary"].get<std::string>() << "\n";
  }
  if (doc.contains("compose_preconditions")) {
    const json& c = doc["compose_preconditions"];
    os << "compose preconditions: " << (c["passed"].get<bool>() ? "pass" : "FAIL")
       << "\n";
  }
  if (doc.contains("replay")) {
    for (const auto& e : doc["replay"]["counterexamples"]) {
      os << "  " << e["condition"].get<std::string>() << " "
         << e["which"].get<std::string>() << ": stored "
         << format_real(e["stored_residual"].get<double>()) << " recomputed "
         << format_real(e["recomputed_residual"].get<double>()) << "  "
         << (e["matches"].get<bool>() && e["still_violates"].get<bool>()
                 ? "reproduced"
                 : "NOT REPRODUCED")
         << "\n";
    }
  }
  for (const auto& e : doc.value("errors", json::array())) {
    os << "error: " << e.get<std::string>() << "\n";
  }
  os << "status: " << doc.value("status", std::string("?")) << "\n";
  return os.str();
}

int run_and_emit(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  const RunResult r = run(spec);
  const std::string text = spec.output == OutputFormat::Json
                               ? r.document.dump(2) + "\n"
                               : render_text(r.document);
  if (spec.output_path) {
    std::ofstream file(*spec.output_path);
    if (!file || !(file << text)) {
      err << "error: cannot write '" << *spec.output_path << "'\n";
      return kExitUsage;
    }
  } else {
    out << text;
  }
  const bool errors_already_shown =
      spec.output == OutputFormat::Text && !spec.output_path;
  if (r.exit_code == kExitUsage && !errors_already_shown) {
    for (const auto& e : r.document.value("errors", json::array())) {
      err << "error: " << e.get<std::string>() << "\n";
    }
  }
  return r.exit_code;
}

}  // namespace smoothcert::cli
