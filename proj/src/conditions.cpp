#include "smoothcert/conditions.hpp"

#include <cmath>
#include <string>

#include "numfmt.hpp"
#include "smoothcert/errors.hpp"

namespace smoothcert {

void ToleranceMode::validate() const {
  if (!(abs_tol > 0.0) || !std::isfinite(abs_tol) || !(rel_tol > 0.0) ||
      !std::isfinite(rel_tol)) {
    throw ConfigError("tolerance: abs_tol and rel_tol must be positive");
  }
}

std::string_view to_string(ConditionId id) noexcept {
  switch (id) {
    case ConditionId::Nest0: return "nest0";
    case ConditionId::Nest1: return "nest1";
    case ConditionId::Nest2: return "nest2";
    case ConditionId::Nest3: return "nest3";
    case ConditionId::Nest4: return "nest4";
    case ConditionId::Nest5: return "nest5";
    case ConditionId::Nest6: return "nest6";
    case ConditionId::Convex0: return "convex0";
    case ConditionId::Convex1: return "convex1";
  }
  return "unknown";
}

ConditionId parse_condition(std::string_view name) {
  for (ConditionId id : kAllConditions) {
    if (to_string(id) == name) return id;
  }
  throw ConfigError("unknown condition '" + std::string(name) +
                    "' (expected nest0..nest6, convex0, convex1)");
}

bool requires_alpha(ConditionId id) noexcept {
  return id == ConditionId::Nest5 || id == ConditionId::Nest6 ||
         id == ConditionId::Convex0;
}

bool requires_L(ConditionId id) noexcept {
  return id != ConditionId::Convex0 && id != ConditionId::Convex1;
}

bool uses_gradient(ConditionId id) noexcept {
  return id != ConditionId::Convex0 && id != ConditionId::Nest6;
}

namespace {

void check_instance(const ConditionInstance& inst) {
  require_same_dim(inst.x, inst.y, "condition instance");
  if (inst.x.dim() != inst.f.dim()) {
    throw DimensionError("condition instance", inst.x.dim(), inst.f.dim());
  }
  if (requires_L(inst.cond) && (!(inst.L > 0.0) || !std::isfinite(inst.L))) {
    throw RangeError(std::string(to_string(inst.cond)) +
                     ": L must be finite and > 0, got " +
                     detail::format_real(inst.L));
  }
  if (requires_alpha(inst.cond)) {
    if (!inst.alpha) {
      throw RangeError(std::string(to_string(inst.cond)) + ": alpha required");
    }
    if (!(*inst.alpha >= 0.0 && *inst.alpha <= 1.0)) {
      throw RangeError(std::string(to_string(inst.cond)) + ": alpha " +
                       detail::format_real(*inst.alpha) + " outside [0, 1]");
    }
  }
}

Residual make(double lhs, double rhs) { return Residual{lhs - rhs, lhs, rhs}; }

}  // namespace

Residual evaluate(const ConditionInstance& inst) {
  check_instance(inst);
  const FunctionHandle& f = inst.f;
  const Vector& x = inst.x;
  const Vector& y = inst.y;
  const double L = inst.L;

  switch (inst.cond) {
    case ConditionId::Nest0: {
      return make(eu_metric(f.grad(x), f.grad(y)), L * eu_metric(x, y));
    }
    case ConditionId::Nest1: {
      const double lin = dot(f.grad(x), vec_sub(y, x));
      return make(f.eval(y), f.eval(x) + lin + (L / 2.0) * metric_sq(x, y));
    }
    case ConditionId::Nest2: {
      const Vector gx = f.grad(x);
      const Vector gy = f.grad(y);
      const double lin = dot(gx, vec_sub(y, x));
      return make(f.eval(x) + lin + (1.0 / (2.0 * L)) * metric_sq(gx, gy),
                  f.eval(y));
    }
    case ConditionId::Nest3: {
      const Vector gx = f.grad(x);
      const Vector gy = f.grad(y);
      return make((1.0 / L) * metric_sq(gx, gy),
                  dot(vec_sub(gx, gy), vec_sub(x, y)));
    }
    case ConditionId::Nest4: {
      const double inner = dot(vec_sub(f.grad(x), f.grad(y)), vec_sub(x, y));
      return make(inner, L * metric_sq(x, y));
    }
    case ConditionId::Nest5: {
      const double a = *inst.alpha;
      const double fz = f.eval(convex_combo(a, x, y));
      const double grad_term =
          (a * (1.0 - a) / (2.0 * L)) * metric_sq(f.grad(x), f.grad(y));
      return make(fz + grad_term, a * f.eval(x) + (1.0 - a) * f.eval(y));
    }
    case ConditionId::Nest6: {
      const double a = *inst.alpha;
      const double fz = f.eval(convex_combo(a, x, y));
      return make(a * f.eval(x) + (1.0 - a) * f.eval(y),
                  fz + a * (1.0 - a) * (L / 2.0) * metric_sq(x, y));
    }
    case ConditionId::Convex0: {
      const double a = *inst.alpha;
      return make(f.eval(convex_combo(a, x, y)),
                  a * f.eval(x) + (1.0 - a) * f.eval(y));
    }
    case ConditionId::Convex1: {
      const double lin = dot(f.grad(x), vec_sub(y, x));
      return make(f.eval(x) + lin, f.eval(y));
    }
  }
  throw ConfigError("unhandled condition");
}

double residual(const ConditionInstance& inst) { return evaluate(inst).value; }

double cauchy_schwarz_gap(const Vector& u, const Vector& v) {
  require_same_dim(u, v, "cauchy_schwarz_gap");
  return eu_norm(u) * eu_norm(v) - std::abs(dot(u, v));
}

double square_identity_gap(double x, double y, double a) {
  if (!(a >= 0.0 && a <= 1.0)) {
    throw RangeError("square_identity_gap: a outside [0, 1]");
  }
  const double b = 1.0 - a;
  const double mix = a * x + b * y;
  const double lhs = a * x * x + b * y * y - mix * mix;
  const double d = x - y;
  return lhs - a * b * d * d;
}

double norm_lemma_gap(const Vector& x, const Vector& y, double a) {
  if (!(a >= 0.0 && a <= 1.0)) {
    throw RangeError("norm_lemma_gap: a outside [0, 1]");
  }
  require_same_dim(x, y, "norm_lemma_gap");
  return a * norm_sq(x) + (1.0 - a) * norm_sq(y) - a * (1.0 - a) * metric_sq(x, y);
}

ChainGaps chain_0_implies_4_gap(const FunctionHandle& f, double L,
                                const Vector& x, const Vector& y,
                                const ToleranceMode& tol) {
  const Residual lip = evaluate({ConditionId::Nest0, f, L, x, y, std::nullopt});
  const Vector dg = vec_sub(f.grad(x), f.grad(y));
  const Vector dx = vec_sub(x, y);
  const double product = eu_norm(dg) * eu_norm(dx);

  ChainGaps out;
  out.applicable = tol.accept(lip.value, lip.scale());
  out.lipschitz_gap = L * norm_sq(dx) - product;
  out.cauchy_schwarz_gap = product - dot(dg, dx);
  return out;
}

}  // namespace smoothcert
