// Python bindings for smoothcert. Report-shaped results (verdicts, estimates,
// suites, DAG reports) are returned as plain dicts with the same layout as the
// CLI's JSON report.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>

#include "smoothcert/checker.hpp"
#include "smoothcert/cli.hpp"
#include "smoothcert/conditions.hpp"
#include "smoothcert/errors.hpp"
#include "smoothcert/estimate.hpp"
#include "smoothcert/fnspec.hpp"
#include "smoothcert/funcs.hpp"
#include "smoothcert/report.hpp"
#include "smoothcert/vecspace.hpp"

namespace py = pybind11;
namespace sc = smoothcert;

namespace {

py::object to_python(const sc::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

// Holds a Python callable so it can be invoked from sampling workers. The GIL
// is taken for every call and for the final release.
std::shared_ptr<py::function> share_callable(py::function fn) {
  return std::shared_ptr<py::function>(new py::function(std::move(fn)),
                                       [](py::function* p) {
                                         py::gil_scoped_acquire gil;
                                         delete p;
                                       });
}

sc::FunctionHandle make_function(std::string name, std::size_t dim,
                                 py::function eval,
                                 std::optional<py::function> grad,
                                 std::optional<std::vector<std::pair<double, double>>> box,
                                 bool claims_convex,
                                 std::optional<double> smooth_L) {
  auto eval_fn = share_callable(std::move(eval));
  sc::FunctionHandle::EvalFn e = [eval_fn](const sc::Vector& x) {
    py::gil_scoped_acquire gil;
    return (*eval_fn)(x.values()).cast<double>();
  };
  std::optional<sc::FunctionHandle::GradFn> g;
  if (grad) {
    auto grad_fn = share_callable(std::move(*grad));
    g = [grad_fn](const sc::Vector& x) {
      py::gil_scoped_acquire gil;
      return sc::Vector((*grad_fn)(x.values()).cast<std::vector<double>>());
    };
  }
  sc::Box b;
  if (box) {
    for (const auto& [lo, hi] : *box) b.push_back({lo, hi});
  }
  sc::FunctionTags tags;
  tags.claims_convex = claims_convex;
  tags.smooth_L = smooth_L;
  return sc::FunctionHandle(std::move(name), dim, std::move(e), std::move(g),
                            std::move(b), tags);
}

sc::ConditionInstance make_instance(sc::ConditionId cond, const sc::FunctionHandle& f,
                                    double L, const sc::Vector& x, const sc::Vector& y,
                                    std::optional<double> alpha) {
  return sc::ConditionInstance{cond, f, L, x, y, alpha};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Numerical certification of convexity and L-smoothness inequalities";
  m.attr("__version__") = std::string(sc::kToolVersion);

  auto base = py::register_exception<sc::Error>(m, "SmoothcertError", PyExc_ValueError);
  py::register_exception<sc::DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<sc::RangeError>(m, "RangeError", base.ptr());
  py::register_exception<sc::DomainError>(m, "DomainError", base.ptr());
  py::register_exception<sc::BoundaryError>(m, "BoundaryError", base.ptr());
  py::register_exception<sc::ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<sc::BracketError>(m, "BracketError", base.ptr());
  py::register_exception<sc::ParseError>(m, "ParseError", base.ptr());

  // --- vecspace -----------------------------------------------------------
  py::class_<sc::Vector>(m, "Vector")
      .def(py::init<std::vector<double>>(), py::arg("coords"))
      .def_property_readonly("dim", &sc::Vector::dim)
      .def_property_readonly("coords", &sc::Vector::values)
      .def("__len__", &sc::Vector::dim)
      .def("__getitem__",
           [](const sc::Vector& v, std::size_t i) {
             if (i >= v.dim()) throw py::index_error();
             return v[i];
           })
      .def("__eq__", [](const sc::Vector& a, const sc::Vector& b) { return a == b; })
      .def("__repr__", [](const sc::Vector& v) {
        return "Vector(" + py::repr(py::cast(v.values())).cast<std::string>() + ")";
      });
  py::implicitly_convertible<py::list, sc::Vector>();
  py::implicitly_convertible<py::tuple, sc::Vector>();

  m.def("dot", &sc::dot);
  m.def("eu_norm", &sc::eu_norm);
  m.def("norm_sq", &sc::norm_sq);
  m.def("metric_sq", &sc::metric_sq);
  m.def("eu_metric", &sc::eu_metric);
  m.def("vec_add", &sc::vec_add);
  m.def("vec_sub", &sc::vec_sub);
  m.def("scalar_mul", &sc::scalar_mul, py::arg("a"), py::arg("x"));
  m.def("convex_combo", &sc::convex_combo, py::arg("alpha"), py::arg("x"), py::arg("y"));

  // --- funcs --------------------------------------------------------------
  py::class_<sc::FunctionHandle>(m, "FunctionHandle")
      .def(py::init(&make_function), py::arg("name"), py::arg("dim"), py::arg("eval"),
           py::arg("grad") = py::none(), py::arg("box") = py::none(),
           py::arg("claims_convex") = false, py::arg("smooth_L") = py::none())
      .def_property_readonly("name", &sc::FunctionHandle::name)
      .def_property_readonly("dim", &sc::FunctionHandle::dim)
      .def_property_readonly("box",
                             [](const sc::FunctionHandle& f) {
                               std::vector<std::pair<double, double>> out;
                               for (const auto& iv : f.box()) out.emplace_back(iv.lo, iv.hi);
                               return out;
                             })
      .def_property_readonly("claims_convex",
                             [](const sc::FunctionHandle& f) { return f.tags().claims_convex; })
      .def_property_readonly("smooth_L",
                             [](const sc::FunctionHandle& f) { return f.tags().smooth_L; })
      .def_property_readonly("control",
                             [](const sc::FunctionHandle& f) { return f.tags().control; })
      .def_property_readonly("has_analytic_gradient",
                             &sc::FunctionHandle::has_analytic_gradient)
      .def_property_readonly("fd_step", &sc::FunctionHandle::fd_step)
      .def("eval", &sc::FunctionHandle::eval)
      .def("__call__", &sc::FunctionHandle::eval)
      .def("grad", &sc::FunctionHandle::grad)
      .def("fd_grad", &sc::FunctionHandle::fd_grad)
      .def("with_fd_step", &sc::FunctionHandle::with_fd_step)
      .def("with_box",
           [](const sc::FunctionHandle& f, const std::vector<std::pair<double, double>>& box) {
             sc::Box b;
             for (const auto& [lo, hi] : box) b.push_back({lo, hi});
             return f.with_box(std::move(b));
           })
      .def("describe", [](const sc::FunctionHandle& f) {
        return to_python(sc::describe_function(f));
      })
      .def("__repr__",
           [](const sc::FunctionHandle& f) {
             return "FunctionHandle('" + f.name() + "', dim=" + std::to_string(f.dim()) + ")";
           });

  m.def("scale", &sc::scale, py::arg("a"), py::arg("f"));
  m.def("fn_sum", &sc::fn_sum, py::arg("f"), py::arg("g"));
  m.def("compose_mono", &sc::compose_mono, py::arg("h"), py::arg("f"));
  m.def("parse_fn_spec", &sc::parse_fn_spec, py::arg("text"), py::arg("dim"));

  auto cat = m.def_submodule("catalog", "built-in test functions");
  cat.def("square", &sc::catalog::square);
  cat.def("square_nonneg", &sc::catalog::square_nonneg);
  cat.def("eu_norm_fn", &sc::catalog::eu_norm_fn, py::arg("dim"));
  cat.def("norm_sq_fn", &sc::catalog::norm_sq_fn, py::arg("dim"));
  cat.def("const_fn", &sc::catalog::const_fn, py::arg("dim"),
          py::arg("c") = sc::catalog::kConstWitness);
  cat.def("affine", &sc::catalog::affine, py::arg("g"), py::arg("b"));
  cat.def("diag_quadratic", &sc::catalog::diag_quadratic, py::arg("d"));
  cat.def("neg_norm_sq", &sc::catalog::neg_norm_sq, py::arg("dim"));
  cat.def("quartic1d", &sc::catalog::quartic1d);

  // --- conditions ---------------------------------------------------------
  py::enum_<sc::ConditionId> cond(m, "ConditionId");
  for (sc::ConditionId id : sc::kAllConditions) {
    cond.value(std::string(sc::to_string(id)).c_str(), id);
  }
  m.def("parse_condition", &sc::parse_condition);

  py::class_<sc::Residual>(m, "Residual")
      .def_readonly("value", &sc::Residual::value)
      .def_readonly("lhs", &sc::Residual::lhs)
      .def_readonly("rhs", &sc::Residual::rhs)
      .def_property_readonly("scale", &sc::Residual::scale);

  m.def(
      "evaluate",
      [](sc::ConditionId c, const sc::FunctionHandle& f, double L, const sc::Vector& x,
         const sc::Vector& y, std::optional<double> alpha) {
        return sc::evaluate(make_instance(c, f, L, x, y, alpha));
      },
      py::arg("cond"), py::arg("f"), py::arg("L"), py::arg("x"), py::arg("y"),
      py::arg("alpha") = py::none());
  m.def(
      "residual",
      [](sc::ConditionId c, const sc::FunctionHandle& f, double L, const sc::Vector& x,
         const sc::Vector& y, std::optional<double> alpha) {
        return sc::residual(make_instance(c, f, L, x, y, alpha));
      },
      py::arg("cond"), py::arg("f"), py::arg("L"), py::arg("x"), py::arg("y"),
      py::arg("alpha") = py::none());
  m.def("cauchy_schwarz_gap", &sc::cauchy_schwarz_gap);
  m.def("square_identity_gap", &sc::square_identity_gap, py::arg("x"), py::arg("y"),
        py::arg("a"));
  m.def("norm_lemma_gap", &sc::norm_lemma_gap, py::arg("x"), py::arg("y"), py::arg("a"));
  m.def(
      "chain_0_implies_4_gap",
      [](const sc::FunctionHandle& f, double L, const sc::Vector& x, const sc::Vector& y) {
        const auto g = sc::chain_0_implies_4_gap(f, L, x, y);
        return py::make_tuple(g.applicable, g.lipschitz_gap, g.cauchy_schwarz_gap);
      },
      py::arg("f"), py::arg("L"), py::arg("x"), py::arg("y"));

  // --- checker / estimate -------------------------------------------------
  py::class_<sc::ToleranceMode>(m, "ToleranceMode")
      .def(py::init([](double abs_tol, double rel_tol) {
             return sc::ToleranceMode{abs_tol, rel_tol};
           }),
           py::arg("abs_tol") = 1e-9, py::arg("rel_tol") = 1e-7)
      .def_readwrite("abs_tol", &sc::ToleranceMode::abs_tol)
      .def_readwrite("rel_tol", &sc::ToleranceMode::rel_tol)
      .def("accept", &sc::ToleranceMode::accept);

  py::class_<sc::SampleConfig>(m, "SampleConfig")
      .def(py::init([](std::uint64_t seed, std::size_t n_samples,
                       std::optional<std::string> alpha_strategy, std::string pair_strategy,
                       std::optional<double> nearby_sigma, sc::ToleranceMode tolerance,
                       unsigned workers) {
             sc::SampleConfig c;
             c.seed = seed;
             c.n_samples = n_samples;
             if (alpha_strategy) c.alpha_strategy = sc::parse_alpha_strategy(*alpha_strategy);
             c.pair_strategy = sc::parse_pair_strategy(pair_strategy);
             c.nearby_sigma = nearby_sigma;
             c.tolerance = tolerance;
             c.workers = workers;
             return c;
           }),
           py::arg("seed") = 0, py::arg("n_samples") = 10000,
           py::arg("alpha_strategy") = py::none(), py::arg("pair_strategy") = "independent",
           py::arg("nearby_sigma") = py::none(), py::arg("tolerance") = sc::ToleranceMode{},
           py::arg("workers") = 1)
      .def_readwrite("seed", &sc::SampleConfig::seed)
      .def_readwrite("n_samples", &sc::SampleConfig::n_samples)
      .def_readwrite("workers", &sc::SampleConfig::workers)
      .def_readwrite("tolerance", &sc::SampleConfig::tolerance);

  m.def(
      "falsify",
      [](sc::ConditionId c, const sc::FunctionHandle& f, double L, const sc::SampleConfig& cfg) {
        sc::json j;
        {
          py::gil_scoped_release release;
          j = sc::to_json(sc::falsify(c, f, L, cfg));
        }
        return to_python(j);
      },
      py::arg("cond"), py::arg("f"), py::arg("L"), py::arg("cfg") = sc::SampleConfig{});
  m.def(
      "estimate_L",
      [](const sc::FunctionHandle& f, const sc::SampleConfig& cfg) {
        sc::json j;
        {
          py::gil_scoped_release release;
          j = sc::to_json(sc::estimate_L(f, cfg));
        }
        return to_python(j);
      },
      py::arg("f"), py::arg("cfg") = sc::SampleConfig{});
  m.def(
      "minimal_L",
      [](sc::ConditionId c, const sc::FunctionHandle& f, const sc::SampleConfig& cfg,
         double lo, double hi) {
        sc::json j;
        {
          py::gil_scoped_release release;
          j = sc::to_json(sc::minimal_L(c, f, cfg, sc::Bracket{lo, hi}));
        }
        return to_python(j);
      },
      py::arg("cond"), py::arg("f"), py::arg("cfg") = sc::SampleConfig{},
      py::arg("lo") = 1e-3, py::arg("hi") = 1e3);
  m.def(
      "equivalence_report",
      [](const sc::FunctionHandle& f, double L, const sc::SampleConfig& cfg) {
        sc::json j;
        {
          py::gil_scoped_release release;
          j = sc::to_json(sc::equivalence_report(f, L, cfg));
        }
        return to_python(j);
      },
      py::arg("f"), py::arg("L"), py::arg("cfg") = sc::SampleConfig{});
  m.def(
      "axiom_suite",
      [](const sc::SampleConfig& cfg) {
        sc::json j;
        {
          py::gil_scoped_release release;
          j = sc::to_json(sc::axiom_suite(cfg));
        }
        return to_python(j);
      },
      py::arg("cfg") = sc::SampleConfig{});
  m.def(
      "identity_suite",
      [](const sc::SampleConfig& cfg) {
        sc::json j;
        {
          py::gil_scoped_release release;
          j = sc::to_json(sc::identity_suite(cfg));
        }
        return to_python(j);
      },
      py::arg("cfg") = sc::SampleConfig{});

  // --- cli ----------------------------------------------------------------
  m.def(
      "run",
      [](const std::string& command, const std::string& fn, std::size_t dim,
         std::optional<std::string> cond, std::optional<double> L, std::uint64_t seed,
         std::size_t samples) {
        namespace cli = sc::cli;
        cli::RunSpec spec;
        bool known = false;
        for (auto c : {cli::Command::Axioms, cli::Command::Check, cli::Command::Estimate,
                       cli::Command::Equiv, cli::Command::Identities}) {
          if (cli::to_string(c) == command) {
            spec.command = c;
            known = true;
          }
        }
        if (!known) throw sc::ConfigError("unknown command '" + command + "'");
        spec.fn_spec = fn;
        spec.dim = dim;
        if (cond) spec.cond = sc::parse_condition(*cond);
        spec.L = L;
        spec.seed = seed;
        spec.n_samples = samples;
        cli::RunResult r;
        {
          py::gil_scoped_release release;
          r = cli::run(spec);
        }
        return py::make_tuple(r.exit_code, to_python(r.document));
      },
      py::arg("command"), py::arg("fn") = "norm2", py::arg("dim") = 2,
      py::arg("cond") = py::none(), py::arg("L") = py::none(), py::arg("seed") = 0,
      py::arg("samples") = 10000);
}
