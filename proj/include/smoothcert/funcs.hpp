#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smoothcert/vecspace.hpp"

namespace smoothcert {

struct Interval {
  double lo = -10.0;
  double hi = 10.0;

  double width() const noexcept { return hi - lo; }
  double center() const noexcept { return 0.5 * (lo + hi); }
  bool contains(double t) const noexcept { return t >= lo && t <= hi; }
  bool operator==(const Interval&) const = default;
};

/// Per-coordinate closed domain. Each interval has lo < hi.
using Box = std::vector<Interval>;

inline constexpr double kDefaultBoxHalfWidth = 10.0;
inline constexpr double kDefaultFdStep = 1e-5;

Box default_box(std::size_t dim);
void validate_box(const Box& box, std::size_t dim);
Vector box_center(const Box& box);

struct FunctionTags {
  bool claims_convex = false;
  // Present when the function claims membership in F_L^1 with this L.
  // Zero means every L > 0 works (constant gradient).
  std::optional<double> smooth_L;
  // Deliberate counterexample generators, excluded from smoothness sweeps.
  bool control = false;
  // Set on compose_mono results: the outer function's monotonicity and
  // convexity were asserted by the caller, not verified.
  bool trusted_monotone_outer = false;
};

class FunctionHandle;

struct Composition {
  std::shared_ptr<const FunctionHandle> outer;
  std::shared_ptr<const FunctionHandle> inner;
};

/// Evaluatable f: R^n -> R with optional analytic gradient and a domain box.
/// Copies share the same immutable state.
class FunctionHandle {
 public:
  using EvalFn = std::function<double(const Vector&)>;
  using GradFn = std::function<Vector(const Vector&)>;

  FunctionHandle(std::string name, std::size_t dim, EvalFn eval,
                 std::optional<GradFn> grad = std::nullopt, Box box = {},
                 FunctionTags tags = {});

  const std::string& name() const noexcept;
  std::size_t dim() const noexcept;
  const Box& box() const noexcept;
  const FunctionTags& tags() const noexcept;
  bool has_analytic_gradient() const noexcept;
  double fd_step() const noexcept;
  // Radius of a ball around the origin that samplers must avoid because the
  // gradient is undefined there (eu_norm_fn). Zero when there is none.
  double excluded_radius() const noexcept;
  const std::optional<Composition>& composition() const noexcept;

  FunctionHandle with_box(Box box) const;
  FunctionHandle with_fd_step(double h) const;
  FunctionHandle with_excluded_radius(double r) const;
  FunctionHandle with_composition(Composition parts) const;

  // Checks dimension and domain box; throws DomainError naming the offending
  // coordinate.
  double eval(const Vector& x) const;
  // Analytic gradient when present, otherwise central differences with the
  // handle's step. The FD path needs x at least fd_step() inside the box.
  Vector grad(const Vector& x) const;
  // Always central differences, regardless of the analytic gradient.
  Vector fd_grad(const Vector& x) const;

  // Skip the domain check; combinators use these on their parts.
  double eval_unchecked(const Vector& x) const;
  Vector grad_unchecked(const Vector& x) const;

  bool in_domain(const Vector& x) const noexcept;

 private:
  struct Impl;
  explicit FunctionHandle(std::shared_ptr<const Impl> impl);
  void check_point(const Vector& x) const;
  Vector central_difference(const Vector& x) const;

  std::shared_ptr<const Impl> impl_;
};

// Convexity-preserving operations. Gradients compose analytically when every part
// has an analytic gradient, otherwise the result falls back to FD.
FunctionHandle scale(double a, const FunctionHandle& f);
FunctionHandle fn_sum(const FunctionHandle& f, const FunctionHandle& g);
FunctionHandle compose_mono(const FunctionHandle& h, const FunctionHandle& f);

namespace catalog {

inline constexpr double kConstWitness = 1337.0;
inline constexpr double kNormExclusionRadius = 1e-3;

FunctionHandle square();
// t -> max(t, 0)^2: convex and nondecreasing on all of R.
FunctionHandle square_nonneg();
FunctionHandle eu_norm_fn(std::size_t dim);
FunctionHandle norm_sq_fn(std::size_t dim);
FunctionHandle const_fn(std::size_t dim, double c = kConstWitness);
FunctionHandle affine(const Vector& g, double b);
FunctionHandle diag_quadratic(const std::vector<double>& d);
FunctionHandle neg_norm_sq(std::size_t dim);
FunctionHandle quartic1d();

// Every built-in instantiated at the given dimension (1-D entries only when
// dim == 1). Parameterised entries use fixed representative parameters.
std::vector<FunctionHandle> all(std::size_t dim);

}  // namespace catalog

}  // namespace smoothcert
