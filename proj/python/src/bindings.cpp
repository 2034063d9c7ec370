#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "halfline/cli.hpp"
#include "halfline/errors.hpp"
#include "halfline/hypothesis.hpp"
#include "halfline/kernel.hpp"
#include "halfline/pendulum.hpp"
#include "halfline/problem_io.hpp"
#include "halfline/solver.hpp"

namespace py = pybind11;
using namespace halfline;

namespace {

/// Slot data of a pair as numpy arrays; `side` is 0 for left/single slots, 1 for right slots.
py::dict pair_arrays(const SolutionPair& s) {
  const Mesh& m = s.u.mesh();
  const auto n = static_cast<py::ssize_t>(m.slot_count());
  py::array_t<double> t(n), u(n), du(n);
  py::array_t<int> side(n);
  auto tt = t.mutable_unchecked<1>();
  auto uu = u.mutable_unchecked<1>();
  auto dd = du.mutable_unchecked<1>();
  auto ss = side.mutable_unchecked<1>();
  for (py::ssize_t j = 0; j < n; ++j) {
    const auto k = static_cast<std::size_t>(j);
    tt(j) = m.slot_time(k);
    ss(j) = m.slot_side(k) == Side::Right ? 1 : 0;
    uu(j) = s.u.value(k);
    dd(j) = s.u.deriv(k);
  }
  // v lives on its own slot layout; sample it at u's slots with the matching side
  py::array_t<double> v(n), dv(n);
  auto vv = v.mutable_unchecked<1>();
  auto dw = dv.mutable_unchecked<1>();
  for (py::ssize_t j = 0; j < n; ++j) {
    const auto k = static_cast<std::size_t>(j);
    const PointValue pv = s.v.eval(m.slot_time(k), m.slot_side(k));
    vv(j) = pv.value;
    dw(j) = pv.deriv;
  }
  py::dict out;
  out["t"] = t;
  out["side"] = side;
  out["u"] = u;
  out["du"] = du;
  out["v"] = v;
  out["dv"] = dv;
  return out;
}

py::dict residual_dict(const ResidualReport& r) {
  py::dict d;
  d["ode_residual_sup"] = r.ode_residual_sup;
  d["jump_residual_sup"] = r.jump_residual_sup;
  d["boundary_residuals"] = r.boundary_residuals;
  d["max_ode"] = r.max_ode();
  d["max_jump"] = r.max_jump();
  return d;
}

struct SolveOutcome {
  SolveResult result;
  ResidualReport residuals;
};

SolveOutcome run_solve(const ProblemFile& pf, std::optional<double> tol, std::optional<std::size_t> max_iter,
                       std::optional<double> damping, std::optional<std::size_t> anderson,
                       std::optional<double> horizon) {
  SolverConfig sc = pf.solver;
  QuadratureConfig qc = pf.quadrature;
  if (tol) sc.tol = *tol;
  if (max_iter) sc.max_iter = *max_iter;
  if (damping) sc.damping = *damping;
  if (anderson) sc.anderson_depth = *anderson;
  if (horizon) qc.horizon = *horizon;
  py::gil_scoped_release release;
  SolveResult r = solve(pf.problem, sc, qc);
  ResidualReport rr = verify_residuals(pf.problem, r.solution);
  return {std::move(r), rr};
}

const CaratheodoryBounds& bounds_of(const ProblemFile& pf) {
  if (!pf.problem.bounds) throw std::invalid_argument("missing bound: the problem supplies no bounds");
  return *pf.problem.bounds;
}

int run_cli(int (*cmd)(const cli::RunOptions&, std::ostream&, std::ostream&), const std::string& problem,
            const std::string& out_dir, std::optional<double> horizon, std::optional<double> tol,
            std::optional<std::uint64_t> seed) {
  cli::RunOptions o;
  o.problem_path = problem;
  o.out_dir = out_dir;
  o.horizon = horizon;
  o.tol = tol;
  o.seed = seed;
  std::ostringstream out, err;
  const int code = cmd(o, out, err);
  py::print(out.str(), py::arg("end") = "");
  if (!err.str().empty()) py::print(err.str(), py::arg("end") = "", py::arg("file") = py::module_::import("sys").attr("stderr"));
  return code;
}

}  // namespace

PYBIND11_MODULE(_halfline, m) {
  m.doc() = "Impulsive coupled boundary-value problems on the half-line";
  m.attr("__version__") = cli::version();

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ProblemFormatError>(m, "ProblemFormatError", PyExc_ValueError);
  py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_ArithmeticError);

  m.def("green", &kernel::green, py::arg("t"), py::arg("s"));
  m.def("kernel_weight_sup", &kernel::kernel_weight_sup, py::arg("s"));
  m.def("boundary_weight_sup", &kernel::boundary_weight_sup, py::arg("A"), py::arg("B"));

  py::class_<ProblemFile>(m, "Problem")
      .def_property_readonly("name", [](const ProblemFile& p) { return p.problem.name; })
      .def_property_readonly("t0", [](const ProblemFile& p) { return p.problem.t0; })
      .def_property_readonly("boundary",
                             [](const ProblemFile& p) {
                               const BoundaryData& b = p.problem.boundary;
                               return py::make_tuple(b.A1, b.A2, b.B1, b.B2);
                             })
      .def_property_readonly("horizon", [](const ProblemFile& p) { return p.quadrature.horizon; })
      .def_property_readonly("has_bounds", [](const ProblemFile& p) { return static_cast<bool>(p.problem.bounds); })
      .def("impulse_points",
           [](const ProblemFile& p, const std::string& component, std::optional<double> horizon) {
             const double H = horizon.value_or(p.quadrature.horizon);
             if (component == "u") return p.problem.u_schedule.points_below(H);
             if (component == "v") return p.problem.v_schedule.points_below(H);
             throw std::invalid_argument("component must be 'u' or 'v'");
           },
           py::arg("component"), py::arg("horizon") = py::none())
      .def("validate",
           [](const ProblemFile& p, std::uint64_t seed) {
             ValidationOptions vo;
             vo.seed = seed;
             const ValidationReport r = validate_problem(p.problem, p.quadrature.horizon, vo);
             py::list checks;
             for (const ValidationCheck& c : r.checks) {
               py::dict d;
               d["name"] = c.name;
               d["passed"] = c.passed;
               d["hard"] = c.hard;
               d["detail"] = c.detail;
               checks.append(d);
             }
             py::dict out;
             out["usable"] = r.usable();
             out["checks"] = checks;
             return out;
           },
           py::arg("seed") = 0)
      .def(
          "solve",
          [](const ProblemFile& p, std::optional<double> tol, std::optional<std::size_t> max_iter,
             std::optional<double> damping, std::optional<std::size_t> anderson, std::optional<double> horizon) {
            const SolveOutcome o = run_solve(p, tol, max_iter, damping, anderson, horizon);
            const SolveDiagnostics& d = o.result.diagnostics;
            py::dict out = pair_arrays(o.result.solution);
            out["converged"] = d.converged;
            out["iterations"] = d.iterations;
            out["residual_history"] = d.residual_history;
            out["contraction_estimate"] = d.contraction_estimate;
            out["residuals"] = residual_dict(o.residuals);
            out["norm"] = norm_X(o.result.solution);
            return out;
          },
          py::arg("tol") = py::none(), py::arg("max_iter") = py::none(), py::arg("damping") = py::none(),
          py::arg("anderson") = py::none(), py::arg("horizon") = py::none())
      .def(
          "compute_rho2",
          [](const ProblemFile& p, double rho1, double rho, std::size_t K) {
            const Rho2Result r = compute_rho2(p.problem, bounds_of(p), rho1, rho, K, p.quadrature);
            py::dict out;
            out["rho2"] = r.rho2;
            out["terms"] = r.terms;
            out["lower_estimate"] = r.lower_estimate;
            out["notes"] = r.notes;
            return out;
          },
          py::arg("rho1") = 0.0, py::arg("rho") = 1.0, py::arg("K") = 1000)
      .def(
          "check_domination",
          [](const ProblemFile& p, double rho, std::size_t samples, std::uint64_t seed) {
            DominationOptions o;
            o.samples = samples;
            o.seed = seed;
            o.t_max = p.quadrature.horizon;
            const DominationResult r = check_domination(p.problem, bounds_of(p), rho, o);
            py::dict out;
            out["tested"] = r.tested;
            out["rejected"] = r.rejected;
            out["violations"] = r.violations.size();
            return out;
          },
          py::arg("rho") = 1.0, py::arg("samples") = 10000, py::arg("seed") = 0)
      .def(
          "check_impulse_bounds",
          [](const ProblemFile& p, double rho, std::size_t K, std::uint64_t seed) {
            ImpulseBoundOptions o;
            o.seed = seed;
            const ImpulseBoundResult r = check_impulse_bounds(p.problem, bounds_of(p), rho, K, o);
            py::dict out;
            out["points_checked"] = r.points_checked;
            out["violations"] = r.violations.size();
            py::dict sums;
            for (int f = 0; f < 4; ++f) {
              const SequenceSummary& s = r.sequences[static_cast<std::size_t>(f)];
              py::dict e;
              e["partial_sum"] = s.partial_sum;
              e["tail"] = s.tail;
              e["tail_is_bound"] = s.tail_is_bound;
              sums[family_name(static_cast<ImpulseFamily>(f))] = e;
            }
            out["sequences"] = sums;
            return out;
          },
          py::arg("rho") = 1.0, py::arg("K") = 1000, py::arg("seed") = 0)
      .def(
          "check_ball_invariance",
          [](const ProblemFile& p, double rho2, std::size_t samples, std::uint64_t seed) {
            BallOptions o;
            o.samples = samples;
            o.seed = seed;
            o.u_lower = p.u_floor;
            const BallInvarianceResult r = check_ball_invariance(p.problem, bounds_of(p), rho2, p.quadrature, o);
            py::dict out;
            out["tested"] = r.tested;
            out["inside"] = r.inside;
            out["max_image_norm"] = r.max_image_norm;
            return out;
          },
          py::arg("rho2"), py::arg("samples") = 100, py::arg("seed") = 0)
      .def("__repr__", [](const ProblemFile& p) { return "<halfline.Problem '" + p.problem.name + "'>"; });

  m.def("load_problem", &load_problem_file, py::arg("path"));
  m.def("parse_problem", &parse_problem, py::arg("text"), py::arg("source") = "<string>");

  m.def(
      "pendulum_bound_Phi",
      [](double rho, double t, double m_, double k, double g, double l0, double t0) {
        PendulumParams pp;
        pp.m = m_, pp.k = k, pp.g = g, pp.l0 = l0, pp.t0 = t0;
        return pendulum_bound_Phi(pp, rho, t);
      },
      py::arg("rho"), py::arg("t"), py::arg("m") = 1.0, py::arg("k") = 1.0, py::arg("g") = 9.8, py::arg("l0") = 1.0,
      py::arg("t0") = 1.0);
  m.def(
      "pendulum_bound_Psi",
      [](double rho, double t, double l_min, double g) {
        PendulumParams pp;
        pp.g = g;
        return pendulum_bound_Psi(pp, rho, t, l_min);
      },
      py::arg("rho"), py::arg("t"), py::arg("l_min"), py::arg("g") = 9.8);

  m.def(
      "cli_solve",
      [](const std::string& problem, const std::string& out_dir, std::optional<double> horizon,
         std::optional<double> tol, std::optional<std::uint64_t> seed) {
        return run_cli(&cli::cmd_solve, problem, out_dir, horizon, tol, seed);
      },
      py::arg("problem"), py::arg("out_dir"), py::arg("horizon") = py::none(), py::arg("tol") = py::none(),
      py::arg("seed") = py::none());
  m.def(
      "cli_check",
      [](const std::string& problem, const std::string& out_dir, std::optional<double> horizon,
         std::optional<double> tol, std::optional<std::uint64_t> seed) {
        return run_cli(&cli::cmd_check, problem, out_dir, horizon, tol, seed);
      },
      py::arg("problem"), py::arg("out_dir"), py::arg("horizon") = py::none(), py::arg("tol") = py::none(),
      py::arg("seed") = py::none());
}
