#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "smoothcert/funcs.hpp"
#include "smoothcert/tolerance.hpp"
#include "smoothcert/vecspace.hpp"

namespace smoothcert {

// Nest0 is Lipschitz continuity of the gradient; Nest1..Nest6 are the six
// inequalities of Nesterov's characterisation of F_L^1. Convex0/Convex1 are
// the zero- and first-order convexity definitions.
enum class ConditionId {
  Nest0,
  Nest1,
  Nest2,
  Nest3,
  Nest4,
  Nest5,
  Nest6,
  Convex0,
  Convex1,
};

inline constexpr std::array<ConditionId, 7> kNesterovConditions{
    ConditionId::Nest0, ConditionId::Nest1, ConditionId::Nest2,
    ConditionId::Nest3, ConditionId::Nest4, ConditionId::Nest5,
    ConditionId::Nest6};

inline constexpr std::array<ConditionId, 9> kAllConditions{
    ConditionId::Nest0,   ConditionId::Nest1, ConditionId::Nest2,
    ConditionId::Nest3,   ConditionId::Nest4, ConditionId::Nest5,
    ConditionId::Nest6,   ConditionId::Convex0, ConditionId::Convex1};

// "nest0".."nest6", "convex0", "convex1".
std::string_view to_string(ConditionId id) noexcept;
// Throws ConfigError listing the valid names.
ConditionId parse_condition(std::string_view name);

bool requires_alpha(ConditionId id) noexcept;
bool requires_L(ConditionId id) noexcept;
bool uses_gradient(ConditionId id) noexcept;

struct ConditionInstance {
  ConditionId cond;
  FunctionHandle f;
  double L = 1.0;
  Vector x;
  Vector y;
  std::optional<double> alpha;
};

/// Both sides of the inequality lhs <= rhs at one instance.
struct Residual {
  double value = 0.0;  // lhs - rhs; <= 0 means the instance satisfies it
  double lhs = 0.0;
  double rhs = 0.0;

  double scale() const noexcept { return ToleranceMode::side_scale(lhs, rhs); }
};

// Throws RangeError for missing/invalid alpha or L <= 0 where required, and
// DimensionError when x, y and f disagree.
Residual evaluate(const ConditionInstance& inst);
double residual(const ConditionInstance& inst);

// ||u||*||v|| - |<u, v>|; nonnegative up to rounding.
double cauchy_schwarz_gap(const Vector& u, const Vector& v);

// [a x^2 + (1-a) y^2 - (a x + (1-a) y)^2] - a (1-a) (x-y)^2; identically 0.
double square_identity_gap(double x, double y, double a);

// a ||x||^2 + (1-a) ||y||^2 - a (1-a) ||x-y||^2; nonnegative.
double norm_lemma_gap(const Vector& x, const Vector& y, double a);

// The two steps of  L||x-y||^2 >= ||g(x)-g(y)|| ||x-y|| >= <g(x)-g(y), x-y>.
// Only meaningful where the Lipschitz bound holds at (x, y); otherwise the
// result is marked inapplicable and the gaps are still filled in.
struct ChainGaps {
  bool applicable = false;
  double lipschitz_gap = 0.0;
  double cauchy_schwarz_gap = 0.0;
};

ChainGaps chain_0_implies_4_gap(const FunctionHandle& f, double L,
                                const Vector& x, const Vector& y,
                                const ToleranceMode& tol = {});

}  // namespace smoothcert
