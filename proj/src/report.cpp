#include "smoothcert/report.hpp"

#include "smoothcert/errors.hpp"

namespace smoothcert {

json to_json(const Vector& v) { return json(v.values()); }

Vector vector_from_json(const json& j) {
  if (!j.is_array()) throw ConfigError("expected an array of numbers");
  std::vector<double> c;
  c.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) throw ConfigError("expected an array of numbers");
    c.push_back(e.get<double>());
  }
  return Vector(std::move(c));
}

json to_json(const ConditionInstance& inst) {
  json j;
  j["x"] = to_json(inst.x);
  j["y"] = to_json(inst.y);
  j["alpha"] = inst.alpha ? json(*inst.alpha) : json(nullptr);
  return j;
}

json to_json(const Verdict& v) {
  json j;
  j["condition"] = to_string(v.cond);
  j["L"] = requires_L(v.cond) ? json(v.L) : json(nullptr);
  j["n_samples"] = v.n_samples;
  j["n_checked"] = v.n_checked;
  j["n_skipped"] = v.n_skipped;
  j["worst_residual"] = v.worst_residual;
  if (const Counterexample* c = v.counterexample()) {
    j["verdict"] = "falsified";
    j["counterexample"] = {
        {"instance", to_json(c->instance)},
        {"residual", c->residual},
        {"shrunk_instance", to_json(c->shrunk_instance)},
        {"shrunk_residual", c->shrunk_residual},
        {"shrink_steps", c->shrink_steps},
    };
  } else {
    const auto& ok = std::get<NoCounterexample>(v.outcome);
    j["verdict"] = "holds";
    j["worst_instance"] = to_json(ok.worst_instance);
  }
  return j;
}

json to_json(const LEstimate& est) {
  return {
      {"L_hat", est.L_hat},
      {"n_pairs", est.n_pairs},
      {"argmax_pair", {to_json(est.argmax_x), to_json(est.argmax_y)}},
  };
}

json to_json(const MinimalL& m) {
  return {
      {"value", m.value},
      {"probes", m.probes},
      {"at_lower_end", m.at_lower_end},
      {"fresh_seed_holds", m.fresh_seed_holds},
  };
}

json to_json(const DagReport& r) {
  json j;
  j["L"] = r.L;
  j["verdicts"] = json::array();
  for (const auto& v : r.verdicts) j["verdicts"].push_back(to_json(v));
  j["edges"] = json::array();
  for (const auto& e : r.edges) {
    j["edges"].push_back({to_string(e.from), to_string(e.to)});
  }
  j["discrepancies"] = json::array();
  for (const auto& d : r.discrepancies) {
    j["discrepancies"].push_back({
        {"edge", {to_string(d.edge.from), to_string(d.edge.to)}},
        {"source_worst_residual", d.source_worst_residual},
        {"target_worst_residual", d.target_worst_residual},
    });
  }
  j["convexity_gate"] = r.convexity_gate ? to_json(*r.convexity_gate) : json(nullptr);
  j["gate_passed"] = r.gate_passed();
  j["equivalence_verified"] = r.equivalence_verified();
  j["summary"] = r.summary();
  return j;
}

json to_json(const CheckResult& c) {
  return {{"name", c.name},
          {"passed", c.passed},
          {"worst_gap", c.worst_gap},
          {"n_checked", c.n_checked}};
}

json to_json(const SuiteReport& s) {
  json checks = json::array();
  for (const auto& c : s.checks) checks.push_back(to_json(c));
  return {{"suite", s.suite}, {"all_passed", s.all_passed()}, {"checks", checks}};
}

json describe_function(const FunctionHandle& f) {
  const auto& t = f.tags();
  json box = json::array();
  for (const auto& iv : f.box()) box.push_back({iv.lo, iv.hi});
  return {
      {"name", f.name()},
      {"dim", f.dim()},
      {"claims_convex", t.claims_convex},
      {"claims_L_smooth", t.smooth_L ? json(*t.smooth_L) : json(nullptr)},
      {"control", t.control},
      {"analytic_gradient", f.has_analytic_gradient()},
      {"fd_step", f.fd_step()},
      {"box", box},
  };
}

}  // namespace smoothcert
