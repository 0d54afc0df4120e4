#include "smoothcert/funcs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "numfmt.hpp"
#include "smoothcert/errors.hpp"

namespace smoothcert {

using detail::format_real;

Box default_box(std::size_t dim) {
  return Box(dim, Interval{-kDefaultBoxHalfWidth, kDefaultBoxHalfWidth});
}

void validate_box(const Box& box, std::size_t dim) {
  if (box.size() != dim) {
    throw DimensionError("box", box.size(), dim);
  }
  for (std::size_t i = 0; i < box.size(); ++i) {
    const auto& iv = box[i];
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.lo < iv.hi)) {
      throw RangeError("box: interval " + std::to_string(i) + " [" +
                       format_real(iv.lo) + ", " + format_real(iv.hi) +
                       "] is empty or not finite");
    }
  }
}

Vector box_center(const Box& box) {
  std::vector<double> c(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) c[i] = box[i].center();
  return Vector(std::move(c));
}

struct FunctionHandle::Impl {
  std::string name;
  std::size_t dim = 0;
  EvalFn eval;
  std::optional<GradFn> grad;
  Box box;
  FunctionTags tags;
  double fd_step = kDefaultFdStep;
  double excluded_radius = 0.0;
  std::optional<Composition> composition;
};

FunctionHandle::FunctionHandle(std::string name, std::size_t dim, EvalFn eval,
                               std::optional<GradFn> grad, Box box,
                               FunctionTags tags) {
  if (dim == 0) {
    throw RangeError("FunctionHandle '" + name + "': dimension must be >= 1");
  }
  if (!eval) {
    throw ConfigError("FunctionHandle '" + name + "': missing evaluator");
  }
  if (grad && !*grad) grad.reset();
  if (box.empty()) box = default_box(dim);
  validate_box(box, dim);
  auto impl = std::make_shared<Impl>();
  impl->name = std::move(name);
  impl->dim = dim;
  impl->eval = std::move(eval);
  impl->grad = std::move(grad);
  impl->box = std::move(box);
  impl->tags = tags;
  impl_ = std::move(impl);
}

FunctionHandle::FunctionHandle(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

const std::string& FunctionHandle::name() const noexcept { return impl_->name; }
std::size_t FunctionHandle::dim() const noexcept { return impl_->dim; }
const Box& FunctionHandle::box() const noexcept { return impl_->box; }
const FunctionTags& FunctionHandle::tags() const noexcept {
  return impl_->tags;
}
bool FunctionHandle::has_analytic_gradient() const noexcept {
  return impl_->grad.has_value();
}
double FunctionHandle::fd_step() const noexcept { return impl_->fd_step; }
double FunctionHandle::excluded_radius() const noexcept {
  return impl_->excluded_radius;
}
const std::optional<Composition>& FunctionHandle::composition() const noexcept {
  return impl_->composition;
}

FunctionHandle FunctionHandle::with_box(Box box) const {
  validate_box(box, dim());
  auto impl = std::make_shared<Impl>(*impl_);
  impl->box = std::move(box);
  return FunctionHandle(std::move(impl));
}

FunctionHandle FunctionHandle::with_fd_step(double h) const {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw RangeError("fd step must be positive and finite");
  }
  auto impl = std::make_shared<Impl>(*impl_);
  impl->fd_step = h;
  return FunctionHandle(std::move(impl));
}

FunctionHandle FunctionHandle::with_excluded_radius(double r) const {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw RangeError("excluded radius must be nonnegative and finite");
  }
  auto impl = std::make_shared<Impl>(*impl_);
  impl->excluded_radius = r;
  return FunctionHandle(std::move(impl));
}

FunctionHandle FunctionHandle::with_composition(Composition parts) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->composition = std::move(parts);
  return FunctionHandle(std::move(impl));
}

bool FunctionHandle::in_domain(const Vector& x) const noexcept {
  if (x.dim() != dim()) return false;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (!impl_->box[i].contains(x[i])) return false;
  }
  return true;
}

void FunctionHandle::check_point(const Vector& x) const {
  if (x.dim() != dim()) {
    throw DimensionError(name(), x.dim(), dim());
  }
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const auto& iv = impl_->box[i];
    if (!iv.contains(x[i])) {
      throw DomainError(name() + ": coordinate " + std::to_string(i) + " = " +
                            format_real(x[i]) + " outside [" +
                            format_real(iv.lo) + ", " + format_real(iv.hi) +
                            "]",
                        i);
    }
  }
}

double FunctionHandle::eval_unchecked(const Vector& x) const {
  const double v = impl_->eval(x);
  if (!std::isfinite(v)) {
    throw RangeError(name() + ": non-finite value");
  }
  return v;
}

double FunctionHandle::eval(const Vector& x) const {
  check_point(x);
  return eval_unchecked(x);
}

Vector FunctionHandle::central_difference(const Vector& x) const {
  const double h = impl_->fd_step;
  std::vector<double> probe(x.values());
  std::vector<double> g(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const double xi = probe[i];
    probe[i] = xi + h;
    const double fp = eval_unchecked(Vector(probe));
    probe[i] = xi - h;
    const double fm = eval_unchecked(Vector(probe));
    probe[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return Vector(std::move(g));
}

Vector FunctionHandle::grad_unchecked(const Vector& x) const {
  if (impl_->grad) {
    Vector g = (*impl_->grad)(x);
    if (g.dim() != dim()) {
      throw DimensionError(name() + " gradient", g.dim(), dim());
    }
    return g;
  }
  return central_difference(x);
}

Vector FunctionHandle::fd_grad(const Vector& x) const {
  check_point(x);
  const double h = impl_->fd_step;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const auto& iv = impl_->box[i];
    if (x[i] - h < iv.lo || x[i] + h > iv.hi) {
      throw BoundaryError(name() + ": coordinate " + std::to_string(i) +
                              " within fd step of the domain boundary",
                          i);
    }
  }
  return central_difference(x);
}

Vector FunctionHandle::grad(const Vector& x) const {
  if (!impl_->grad) return fd_grad(x);
  check_point(x);
  return grad_unchecked(x);
}

// ---------------------------------------------------------------------------
// Combinators

namespace {

Box intersect(const Box& a, const Box& b) {
  Box out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = Interval{std::max(a[i].lo, b[i].lo), std::min(a[i].hi, b[i].hi)};
  }
  return out;
}

}  // namespace

FunctionHandle scale(double a, const FunctionHandle& f) {
  if (!std::isfinite(a) || a < 0.0) {
    throw RangeError("scale: factor " + format_real(a) +
                     " must be a finite real >= 0");
  }
  FunctionTags tags;
  tags.claims_convex = f.tags().claims_convex;
  if (f.tags().smooth_L) tags.smooth_L = a * *f.tags().smooth_L;

  auto eval = [a, f](const Vector& x) { return a * f.eval_unchecked(x); };
  std::optional<FunctionHandle::GradFn> grad;
  if (f.has_analytic_gradient()) {
    grad = [a, f](const Vector& x) { return scalar_mul(a, f.grad_unchecked(x)); };
  }
  return FunctionHandle("scale(" + format_real(a) + ", " + f.name() + ")",
                        f.dim(), std::move(eval), std::move(grad), f.box(),
                        tags)
      .with_fd_step(f.fd_step())
      .with_excluded_radius(f.excluded_radius());
}

FunctionHandle fn_sum(const FunctionHandle& f, const FunctionHandle& g) {
  if (f.dim() != g.dim()) {
    throw DimensionError("sum", f.dim(), g.dim());
  }
  FunctionTags tags;
  tags.claims_convex = f.tags().claims_convex && g.tags().claims_convex;
  if (f.tags().smooth_L && g.tags().smooth_L) {
    tags.smooth_L = *f.tags().smooth_L + *g.tags().smooth_L;
  }
  auto eval = [f, g](const Vector& x) {
    return f.eval_unchecked(x) + g.eval_unchecked(x);
  };
  std::optional<FunctionHandle::GradFn> grad;
  if (f.has_analytic_gradient() && g.has_analytic_gradient()) {
    grad = [f, g](const Vector& x) {
      return vec_add(f.grad_unchecked(x), g.grad_unchecked(x));
    };
  }
  return FunctionHandle("sum(" + f.name() + ", " + g.name() + ")", f.dim(),
                        std::move(eval), std::move(grad),
                        intersect(f.box(), g.box()), tags)
      .with_fd_step(std::min(f.fd_step(), g.fd_step()))
      .with_excluded_radius(std::max(f.excluded_radius(), g.excluded_radius()));
}

FunctionHandle compose_mono(const FunctionHandle& h, const FunctionHandle& f) {
  if (h.dim() != 1) {
    throw DimensionError("compose: outer function", h.dim(), 1);
  }
  FunctionTags tags;
  tags.claims_convex = h.tags().claims_convex && f.tags().claims_convex;
  tags.trusted_monotone_outer = true;

  // The outer function is applied to f's range, not its own box.
  auto eval = [h, f](const Vector& x) {
    return h.eval_unchecked(Vector{f.eval_unchecked(x)});
  };
  std::optional<FunctionHandle::GradFn> grad;
  if (h.has_analytic_gradient() && f.has_analytic_gradient()) {
    grad = [h, f](const Vector& x) {
      const double outer_slope = h.grad_unchecked(Vector{f.eval_unchecked(x)})[0];
      return scalar_mul(outer_slope, f.grad_unchecked(x));
    };
  }
  return FunctionHandle("compose(" + h.name() + ", " + f.name() + ")", f.dim(),
                        std::move(eval), std::move(grad), f.box(), tags)
      .with_fd_step(f.fd_step())
      .with_excluded_radius(f.excluded_radius())
      .with_composition(Composition{std::make_shared<const FunctionHandle>(h),
                                    std::make_shared<const FunctionHandle>(f)});
}

// ---------------------------------------------------------------------------
// Catalog

namespace catalog {

FunctionHandle square() {
  FunctionTags tags{.claims_convex = true, .smooth_L = 2.0};
  return FunctionHandle(
      "square", 1, [](const Vector& x) { return x[0] * x[0]; },
      [](const Vector& x) { return Vector{2.0 * x[0]}; }, {}, tags);
}

FunctionHandle square_nonneg() {
  FunctionTags tags{.claims_convex = true, .smooth_L = 2.0};
  return FunctionHandle(
      "sqpos", 1,
      [](const Vector& x) {
        const double t = std::max(x[0], 0.0);
        return t * t;
      },
      [](const Vector& x) { return Vector{2.0 * std::max(x[0], 0.0)}; }, {},
      tags);
}

FunctionHandle eu_norm_fn(std::size_t dim) {
  FunctionTags tags{.claims_convex = true, .smooth_L = std::nullopt};
  return FunctionHandle(
             "norm", dim, [](const Vector& x) { return eu_norm(x); },
             [](const Vector& x) {
               const double n = eu_norm(x);
               if (n == 0.0) {
                 throw DomainError("norm: gradient undefined at the origin", 0);
               }
               return scalar_mul(1.0 / n, x);
             },
             {}, tags)
      .with_excluded_radius(kNormExclusionRadius);
}

FunctionHandle norm_sq_fn(std::size_t dim) {
  FunctionTags tags{.claims_convex = true, .smooth_L = 2.0};
  return FunctionHandle(
      "norm2", dim, [](const Vector& x) { return norm_sq(x); },
      [](const Vector& x) { return scalar_mul(2.0, x); }, {}, tags);
}

FunctionHandle const_fn(std::size_t dim, double c) {
  if (!std::isfinite(c)) throw RangeError("const: value must be finite");
  FunctionTags tags{.claims_convex = true, .smooth_L = 0.0};
  return FunctionHandle(
      "const(" + format_real(c) + ")", dim, [c](const Vector&) { return c; },
      [dim](const Vector&) { return Vector::zeros(dim); }, {}, tags);
}

FunctionHandle affine(const Vector& g, double b) {
  if (!std::isfinite(b)) throw RangeError("affine: offset must be finite");
  FunctionTags tags{.claims_convex = true, .smooth_L = 0.0};
  std::string name = "affine(";
  for (double gi : g) name += format_real(gi) + ", ";
  name += format_real(b) + ")";
  return FunctionHandle(
      std::move(name), g.dim(), [g, b](const Vector& x) { return dot(g, x) + b; },
      [g](const Vector&) { return g; }, {}, tags);
}

FunctionHandle diag_quadratic(const std::vector<double>& d) {
  if (d.empty()) throw RangeError("diagq: needs at least one coefficient");
  std::string name = "diagq(";
  double dmax = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!std::isfinite(d[i]) || d[i] < 0.0) {
      throw RangeError("diagq: coefficient " + std::to_string(i) + " = " +
                       format_real(d[i]) + " must be a finite real >= 0");
    }
    dmax = std::max(dmax, d[i]);
    name += (i ? ", " : "") + format_real(d[i]);
  }
  name += ")";
  FunctionTags tags{.claims_convex = true, .smooth_L = 2.0 * dmax};
  return FunctionHandle(
      std::move(name), d.size(),
      [d](const Vector& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) s += d[i] * x[i] * x[i];
        return s;
      },
      [d](const Vector& x) {
        std::vector<double> g(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) g[i] = 2.0 * d[i] * x[i];
        return Vector(std::move(g));
      },
      {}, tags);
}

FunctionHandle neg_norm_sq(std::size_t dim) {
  FunctionTags tags{.claims_convex = false, .smooth_L = std::nullopt, .control = true};
  return FunctionHandle(
      "neg_norm2", dim, [](const Vector& x) { return -norm_sq(x); },
      [](const Vector& x) { return scalar_mul(-2.0, x); }, {}, tags);
}

FunctionHandle quartic1d() {
  FunctionTags tags{.claims_convex = true, .smooth_L = std::nullopt, .control = true};
  return FunctionHandle(
      "quartic", 1,
      [](const Vector& x) {
        const double s = x[0] * x[0];
        return s * s;
      },
      [](const Vector& x) { return Vector{4.0 * x[0] * x[0] * x[0]}; }, {},
      tags);
}

std::vector<FunctionHandle> all(std::size_t dim) {
  std::vector<double> d(dim);
  std::vector<double> g(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    d[i] = (i % 2 == 0) ? 1.0 : 5.0;
    g[i] = (i % 2 == 0) ? 1.0 : -2.0;
  }
  std::vector<FunctionHandle> out;
  if (dim == 1) {
    out.push_back(square());
    out.push_back(square_nonneg());
    out.push_back(quartic1d());
  }
  out.push_back(eu_norm_fn(dim));
  out.push_back(norm_sq_fn(dim));
  out.push_back(const_fn(dim));
  out.push_back(affine(Vector(g), 0.5));
  out.push_back(diag_quadratic(d));
  out.push_back(neg_norm_sq(dim));
  return out;
}

}  // namespace catalog

}  // namespace smoothcert
