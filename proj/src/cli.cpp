#include "halfline/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "halfline/errors.hpp"
#include "halfline/hypothesis.hpp"
#include "halfline/problem_io.hpp"
#include "halfline/solver.hpp"
#include "json.hpp"

#ifndef HALFLINE_VERSION
#define HALFLINE_VERSION "0.0.0"
#endif

namespace halfline::cli {

namespace fs = std::filesystem;
using nlohmann::json;

const char* version() { return HALFLINE_VERSION; }

namespace {

/// NaN and infinities are not JSON; they are written as null and strings.
json num(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

struct Resolved {
  ProblemFile file;
  std::uint64_t seed = 0;
  double rho = 1.0, rho1 = 0.0;
  std::size_t K = 1000, samples = 10'000, ball_samples = 100;
  bool self_consistent = false;
  std::vector<double> horizons{20.0, 40.0, 80.0};
  std::size_t mesh_levels = 1;
  fs::path out_dir;
};

json solver_json(const SolverConfig& s) {
  return {{"max_iter", s.max_iter}, {"tol", s.tol}, {"damping", s.damping}, {"anderson", s.anderson_depth}};
}

json quadrature_json(const QuadratureConfig& q) {
  return {{"horizon", q.horizon},
          {"panels_per_piece", q.panels_per_piece},
          {"max_step", q.max_step},
          {"gauss_points", q.gauss_points},
          {"abs_tol", q.abs_tol}};
}

std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

Resolved resolve(const RunOptions& o) {
  json manifest = json::object();
  std::string problem_path = o.problem_path;
  if (o.manifest_path) {
    std::ifstream in(*o.manifest_path);
    if (!in) throw ProblemFormatError("manifest", "cannot open manifest '" + *o.manifest_path + "'");
    try {
      in >> manifest;
    } catch (const json::exception& e) {
      throw ProblemFormatError("manifest", e.what());
    }
    if (problem_path.empty() && manifest.contains("problem")) problem_path = manifest["problem"].get<std::string>();
  }
  if (problem_path.empty()) throw ProblemFormatError("problem", "no problem file given");

  Resolved r;
  r.file = load_problem_file(problem_path);
  SolverConfig& sc = r.file.solver;
  QuadratureConfig& qc = r.file.quadrature;

  try {
    if (manifest.contains("solver")) {
      const json& s = manifest["solver"];
      sc.max_iter = s.value("max_iter", sc.max_iter);
      sc.tol = s.value("tol", sc.tol);
      sc.damping = s.value("damping", sc.damping);
      sc.anderson_depth = s.value("anderson", sc.anderson_depth);
    }
    if (manifest.contains("quadrature")) {
      const json& q = manifest["quadrature"];
      qc.horizon = q.value("horizon", qc.horizon);
      qc.panels_per_piece = q.value("panels_per_piece", qc.panels_per_piece);
      qc.max_step = q.value("max_step", qc.max_step);
      qc.gauss_points = q.value("gauss_points", qc.gauss_points);
      qc.abs_tol = q.value("abs_tol", qc.abs_tol);
    }
    r.seed = manifest.value("seed", r.seed);
    if (manifest.contains("check")) {
      const json& c = manifest["check"];
      r.rho = c.value("rho", r.rho);
      r.rho1 = c.value("rho1", r.rho1);
      r.K = c.value("K", r.K);
      r.samples = c.value("samples", r.samples);
      r.ball_samples = c.value("ball_samples", r.ball_samples);
      r.self_consistent = c.value("self_consistent", r.self_consistent);
    }
    if (manifest.contains("study")) {
      const json& s = manifest["study"];
      if (s.contains("horizons")) r.horizons = s["horizons"].get<std::vector<double>>();
      r.mesh_levels = s.value("mesh_levels", r.mesh_levels);
    }
  } catch (const json::exception& e) {
    throw ProblemFormatError("manifest", e.what());
  }
  if (manifest.contains("t0") && !o.t0) {
    const double t0 = manifest["t0"].get<double>();
    if (r.file.pendulum) {
      r.file.pendulum->t0 = t0;
      r.file.problem = build_pendulum_problem(*r.file.pendulum);
    } else {
      r.file.problem.t0 = t0;
    }
  }

  if (o.horizon) qc.horizon = *o.horizon;
  if (o.tol) sc.tol = *o.tol;
  if (o.damping) sc.damping = *o.damping;
  if (o.max_iter) sc.max_iter = *o.max_iter;
  if (o.anderson) sc.anderson_depth = *o.anderson;
  if (o.seed) r.seed = *o.seed;
  if (o.rho) r.rho = *o.rho;
  if (o.rho1) r.rho1 = *o.rho1;
  if (o.K) r.K = *o.K;
  if (o.samples) r.samples = *o.samples;
  if (o.ball_samples) r.ball_samples = *o.ball_samples;
  if (o.self_consistent) r.self_consistent = *o.self_consistent;
  if (o.horizons) r.horizons = *o.horizons;
  if (o.mesh_levels) r.mesh_levels = *o.mesh_levels;
  if (o.t0) {
    if (r.file.pendulum) {
      r.file.pendulum->t0 = *o.t0;
      r.file.problem = build_pendulum_problem(*r.file.pendulum);
    } else {
      r.file.problem.t0 = *o.t0;
    }
  }
  sc.validate();
  qc.validate();
  r.out_dir = resolve_out_dir(o);
  fs::create_directories(r.out_dir);
  return r;
}

json manifest_json(const Resolved& r, const std::string& command) {
  json m = {{"tool", "halfline"},
            {"version", version()},
            {"command", command},
            {"problem", r.file.source},
            {"t0", r.file.problem.t0},
            {"seed", r.seed},
            {"solver", solver_json(r.file.solver)},
            {"quadrature", quadrature_json(r.file.quadrature)},
            {"timestamp", timestamp_utc()}};
  if (command == "check") {
    m["check"] = {{"rho", r.rho},         {"rho1", r.rho1},
                  {"K", r.K},             {"samples", r.samples},
                  {"ball_samples", r.ball_samples}, {"self_consistent", r.self_consistent}};
  }
  if (command == "study") m["study"] = {{"horizons", r.horizons}, {"mesh_levels", r.mesh_levels}};
  return m;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  out << std::setw(2) << j << '\n';
}

json validation_json(const ValidationReport& v) {
  json checks = json::array();
  for (const ValidationCheck& c : v.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"hard", c.hard},
                      {"detail", c.detail},
                      {"count", c.count},
                      {"locations", c.locations}});
  }
  return {{"usable", v.usable()}, {"all_passed", v.all_passed()}, {"checks", checks}};
}

json truncation_json(const TruncationReport& t) {
  return {{"integral_tail_estimate", num(t.integral_tail_estimate)},
          {"impulse_tail_estimate", num(t.impulse_tail_estimate)},
          {"K_used", t.K_used},
          {"integral_tail_is_bound", t.integral_tail_is_bound},
          {"impulse_tail_is_bound", t.impulse_tail_is_bound},
          {"warning", t.warning}};
}

json residual_json(const ResidualReport& r) {
  return {{"ode_residual_sup", {{"u", num(r.ode_residual_sup[0])}, {"v", num(r.ode_residual_sup[1])}}},
          {"ode_residual_at", {{"u", r.ode_residual_at[0]}, {"v", r.ode_residual_at[1]}}},
          {"jump_residual_sup",
           {{"I0", num(r.jump_residual_sup[0])},
            {"I1", num(r.jump_residual_sup[1])},
            {"J0", num(r.jump_residual_sup[2])},
            {"J1", num(r.jump_residual_sup[3])}}},
          {"boundary_residuals",
           {{"u(0)-A1", num(r.boundary_residuals[0])},
            {"v(0)-A2", num(r.boundary_residuals[1])},
            {"u'(H)-B1", num(r.boundary_residuals[2])},
            {"v'(H)-B2", num(r.boundary_residuals[3])}}},
          {"max_ode", num(r.max_ode())},
          {"max_jump", num(r.max_jump())}};
}

/// Validates and reports; returns false (after printing) if the problem is unusable.
bool validate_or_report(const Resolved& r, std::ostream& err, json* out) {
  ValidationOptions vo;
  vo.seed = r.seed;
  const ValidationReport v = validate_problem(r.file.problem, r.file.quadrature.horizon, vo);
  if (out) *out = validation_json(v);
  for (const ValidationCheck& c : v.checks) {
    if (!c.passed) err << (c.hard ? "error: " : "warning: ") << c.name << ": " << c.detail << '\n';
  }
  return v.usable();
}

void write_solution_files(const fs::path& dir, const SolutionPair& s) {
  const Mesh& mu = s.u.mesh();
  const Mesh& mv = s.v.mesh();
  std::ofstream csv(dir / "solution.csv");
  std::ofstream dat(dir / "solution.dat");
  csv.precision(17);
  dat.precision(17);
  csv << "t,side,u,du,v,dv\n";
  dat << "# t u du v dv  (blank lines separate smooth pieces)\n";
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double t = mu.time(i);
    const bool doubled = mu.doubled(i) || mv.doubled(i);
    auto row = [&](Side side, char tag) {
      const PointValue u = side == Side::Left ? s.u.left(i) : s.u.right(i);
      const PointValue v = side == Side::Left ? s.v.left(i) : s.v.right(i);
      csv << t << ',' << tag << ',' << u.value << ',' << u.deriv << ',' << v.value << ',' << v.deriv << '\n';
      dat << t << ' ' << u.value << ' ' << u.deriv << ' ' << v.value << ' ' << v.deriv << '\n';
    };
    row(Side::Left, '-');
    if (doubled) {
      if (i > 0) dat << "\n\n";
      row(Side::Right, '+');
    }
  }
  std::ofstream gp(dir / "plot.gp");
  gp << "set terminal pngcairo size 1000,700\n"
        "set output 'solution.png'\n"
        "set xlabel 't'\n"
        "set key outside\n"
        "plot 'solution.dat' using 1:2 with lines title 'u', \\\n"
        "     'solution.dat' using 1:4 with lines title 'v'\n";
}

int finish_with_error(std::ostream& err, const std::exception& e) {
  err << "error: " << e.what() << '\n';
  return kError;
}

}  // namespace

fs::path resolve_out_dir(const RunOptions& o) {
  if (o.out_dir) return *o.out_dir;
  if (const char* env = std::getenv("HALFLINE_OUT_DIR"); env && *env) return fs::path(env);
  return fs::path("halfline-out");
}

int cmd_solve(const RunOptions& o, std::ostream& out, std::ostream& err) {
  try {
    const Resolved r = resolve(o);
    json validation;
    if (!validate_or_report(r, err, &validation)) return kError;
    const SolveResult res = solve(r.file.problem, r.file.solver, r.file.quadrature);
    const ResidualReport rr = verify_residuals(r.file.problem, res.solution);
    const SolveDiagnostics& d = res.diagnostics;

    write_solution_files(r.out_dir, res.solution);
    json hist = json::array();
    for (double h : d.residual_history) hist.push_back(num(h));
    json jumps = json::object();
    for (const auto& [name, fn] : {std::pair{"u", &res.solution.u}, std::pair{"v", &res.solution.v}}) {
      json list = json::array();
      for (const Jump& j : fn->jumps()) list.push_back({{"t", j.t}, {"dvalue", j.dvalue}, {"dderiv", j.dderiv}});
      jumps[name] = list;
    }
    const json diag = {{"problem", r.file.problem.name},
                       {"converged", d.converged},
                       {"diverged", d.diverged},
                       {"iterations", d.iterations},
                       {"returned_iteration", d.returned_iteration},
                       {"final_residual", num(d.residual_history.empty() ? 0.0 : d.residual_history[d.returned_iteration])},
                       {"contraction_estimate", num(d.contraction_estimate)},
                       {"residual_history", hist},
                       {"truncation", truncation_json(d.truncation)},
                       {"residuals", residual_json(rr)},
                       {"jumps", jumps},
                       {"validation", validation},
                       {"solver", solver_json(r.file.solver)},
                       {"quadrature", quadrature_json(r.file.quadrature)}};
    write_json(r.out_dir / "diagnostics.json", diag);
    write_json(r.out_dir / "manifest.json", manifest_json(r, "solve"));

    out << "problem " << r.file.problem.name << ": " << (d.converged ? "converged" : "NOT converged") << " after "
        << d.iterations << " iterations, residual "
        << (d.residual_history.empty() ? 0.0 : d.residual_history[d.returned_iteration]) << '\n'
        << "max ODE residual " << rr.max_ode() << ", max jump residual " << rr.max_jump() << '\n'
        << "artifacts in " << r.out_dir.string() << '\n';
    if (d.truncation.warning) err << "warning: truncation tail estimate exceeds abs_tol and is not a bound\n";
    return d.converged ? kSuccess : kNotConverged;
  } catch (const std::exception& e) {
    return finish_with_error(err, e);
  }
}

int cmd_check(const RunOptions& o, std::ostream& out, std::ostream& err) {
  try {
    const Resolved r = resolve(o);
    json validation;
    if (!validate_or_report(r, err, &validation)) return kError;
    const ImpulsiveCoupledBVP& p = r.file.problem;
    if (!p.bounds) {
      err << "error: missing bound: the problem supplies no 'bounds' section\n";
      return kError;
    }
    const CaratheodoryBounds& b = *p.bounds;
    const QuadratureConfig& qc = r.file.quadrature;

    double rho = r.rho;
    Rho2Result r2 = compute_rho2(p, b, r.rho1, rho, r.K, qc);
    json self_consistency = nullptr;
    bool self_consistent_ok = true;
    if (r.self_consistent) {
      // ρ <- ρ2(ρ) until it settles; the bound chain then closes on one radius.
      json trail = json::array({rho});
      bool settled = false;
      for (int it = 0; it < 100 && std::isfinite(r2.rho2) && r2.rho2 < 1e12; ++it) {
        if (std::abs(r2.rho2 - rho) <= 1e-10 * std::max(1.0, rho)) {
          settled = true;
          break;
        }
        rho = r2.rho2;
        trail.push_back(rho);
        r2 = compute_rho2(p, b, r.rho1, rho, r.K, qc);
      }
      self_consistent_ok = settled;
      self_consistency = {{"settled", settled}, {"rho_trail", trail}};
    }

    DominationOptions dopt;
    dopt.samples = r.samples;
    dopt.seed = r.seed;
    dopt.t_max = qc.horizon;
    const DominationResult dom = check_domination(p, b, rho, dopt);
    ImpulseBoundOptions iopt;
    iopt.seed = r.seed;
    const ImpulseBoundResult imp = check_impulse_bounds(p, b, rho, r.K, iopt);

    BallOptions bopt;
    bopt.samples = r.ball_samples;
    bopt.seed = r.seed;
    bopt.u_lower = r.file.u_floor;
    BallInvarianceResult ball;
    const bool rho2_finite = std::isfinite(r2.rho2);
    if (rho2_finite) ball = check_ball_invariance(p, b, r2.rho2, qc, bopt);

    json dviol = json::array();
    for (std::size_t i = 0; i < dom.violations.size() && i < 100; ++i) {
      const DominationViolation& v = dom.violations[i];
      dviol.push_back({{"function", std::string(1, v.which)}, {"t", v.t}, {"x", v.x}, {"y", v.y}, {"z", v.z},
                       {"w", v.w}, {"value", num(v.value)}, {"bound", num(v.bound)}});
    }
    json iviol = json::array();
    for (std::size_t i = 0; i < imp.violations.size() && i < 100; ++i) {
      const ImpulseViolation& v = imp.violations[i];
      iviol.push_back({{"family", family_name(v.family)}, {"k", v.k}, {"point", v.point}, {"a", v.a},
                       {"b", v.b}, {"value", num(v.value)}, {"bound", num(v.bound)}});
    }
    json seqs = json::array();
    for (int f = 0; f < 4; ++f) {
      const SequenceSummary& s = imp.sequences[static_cast<std::size_t>(f)];
      json cps = json::array();
      for (const auto& [k, sum] : s.checkpoints) cps.push_back({{"K", k}, {"partial_sum", num(sum)}});
      seqs.push_back({{"family", family_name(static_cast<ImpulseFamily>(f))},
                      {"present", s.present},
                      {"partial_sum", num(s.partial_sum)},
                      {"checkpoints", cps},
                      {"tail", s.tail ? num(*s.tail) : json(nullptr)},
                      {"tail_is_bound", s.tail_is_bound}});
    }
    json failing = json::array();
    for (std::size_t i = 0; i < ball.failing_image_norms.size() && i < 100; ++i) {
      failing.push_back(num(ball.failing_image_norms[i]));
    }

    const bool dom_pass = dom.violations.empty() && dom.tested > 0;
    const bool imp_pass = imp.violations.empty();
    const bool ball_pass = rho2_finite && ball.tested > 0 && ball.inside == ball.tested;
    const bool all_pass = dom_pass && imp_pass && rho2_finite && ball_pass && self_consistent_ok;

    const json report = {
        {"problem", p.name},
        {"rho", rho},
        {"rho1", r.rho1},
        {"K", r.K},
        {"admissible", b.admissible_description},
        {"validation", validation},
        {"domination",
         {{"tested", dom.tested},
          {"rejected", dom.rejected},
          {"violation_count", dom.violations.size()},
          {"violations", dviol}}},
        {"impulse_bounds",
         {{"points_checked", imp.points_checked},
          {"violation_count", imp.violations.size()},
          {"violations", iviol},
          {"sequences", seqs}}},
        {"rho2",
         {{"value", num(r2.rho2)},
          {"terms", {num(r2.terms[0]), num(r2.terms[1]), num(r2.terms[2]), num(r2.terms[3]), num(r2.terms[4])}},
          {"K1", r2.K1},
          {"K2", r2.K2},
          {"sums", {{"phi", num(r2.sums[0])}, {"psi", num(r2.sums[1])}, {"phij", num(r2.sums[2])}, {"thetaj", num(r2.sums[3])}}},
          {"int_Q_Phi", num(r2.int_Q_Phi)},
          {"int_Q_Psi", num(r2.int_Q_Psi)},
          {"int_Phi", num(r2.int_Phi)},
          {"int_Psi", num(r2.int_Psi)},
          {"lower_estimate", r2.lower_estimate},
          {"notes", r2.notes}}},
        {"self_consistency", self_consistency},
        {"ball_invariance",
         {{"tested", ball.tested},
          {"inside", ball.inside},
          {"rejected", ball.rejected},
          {"max_image_norm", num(ball.max_image_norm)},
          {"failing_image_norms", failing}}},
        {"summary",
         {{"domination", dom_pass},
          {"impulse_bounds", imp_pass},
          {"rho2_finite", rho2_finite},
          {"ball_invariance", ball_pass},
          {"self_consistency", self_consistent_ok},
          {"all_pass", all_pass}}}};
    write_json(r.out_dir / "hypothesis_report.json", report);
    write_json(r.out_dir / "manifest.json", manifest_json(r, "check"));

    out << "domination: " << (dom_pass ? "pass" : "FAIL") << " (" << dom.tested << " samples, "
        << dom.violations.size() << " violations)\n"
        << "impulse bounds: " << (imp_pass ? "pass" : "FAIL") << " (" << imp.points_checked << " points, "
        << imp.violations.size() << " violations)\n"
        << "rho2 = " << r2.rho2 << (r2.lower_estimate ? " (lower estimate)" : "") << '\n'
        << "ball invariance: " << (ball_pass ? "pass" : "FAIL") << " (" << ball.inside << "/" << ball.tested
        << " inside)\n";
    if (r.self_consistent) out << "self-consistent radius: " << (self_consistent_ok ? "found" : "NOT found") << '\n';
    return all_pass ? kSuccess : kAuditFailed;
  } catch (const std::exception& e) {
    return finish_with_error(err, e);
  }
}

int cmd_study(const RunOptions& o, std::ostream& out, std::ostream& err) {
  Resolved r;
  try {
    r = resolve(o);
    if (!validate_or_report(r, err, nullptr)) return kError;
  } catch (const std::exception& e) {
    return finish_with_error(err, e);
  }
  if (r.horizons.empty() || r.mesh_levels == 0) {
    err << "error: study needs at least one horizon and one mesh level\n";
    return kError;
  }
  struct Cell {
    double horizon, max_step;
    std::size_t level;
    std::optional<SolveResult> result;
    std::optional<ResidualReport> residuals;
    std::string error;
    double diff_horizon = std::numeric_limits<double>::quiet_NaN();
    double diff_level = std::numeric_limits<double>::quiet_NaN();
  };
  std::vector<Cell> cells;
  bool any_error = false, all_converged = true;
  for (std::size_t level = 0; level < r.mesh_levels; ++level) {
    for (double H : r.horizons) {
      Cell c{H, r.file.quadrature.max_step / std::pow(2.0, static_cast<double>(level)), level, {}, {}, {}};
      QuadratureConfig q = r.file.quadrature;
      q.horizon = H;
      q.max_step = c.max_step;
      try {
        c.result = solve(r.file.problem, r.file.solver, q);
        c.residuals = verify_residuals(r.file.problem, c.result->solution);
        all_converged = all_converged && c.result->diagnostics.converged;
      } catch (const std::exception& e) {
        c.error = e.what();
        any_error = true;
      }
      cells.push_back(std::move(c));
    }
  }
  const std::size_t nh = r.horizons.size();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    Cell& c = cells[i];
    if (!c.result) continue;
    if (i % nh > 0 && cells[i - 1].result) c.diff_horizon = distance_X(cells[i - 1].result->solution, c.result->solution);
    if (i >= nh && cells[i - nh].result) c.diff_level = distance_X(cells[i - nh].result->solution, c.result->solution);
  }

  std::ofstream csv(r.out_dir / "study.csv");
  csv.precision(10);
  csv << "horizon,level,max_step,converged,iterations,residual,max_ode,max_jump,diff_prev_horizon,diff_prev_level,"
         "integral_tail,impulse_tail,error\n";
  json rows = json::array();
  for (const Cell& c : cells) {
    json row = {{"horizon", c.horizon}, {"level", c.level}, {"max_step", c.max_step}};
    csv << c.horizon << ',' << c.level << ',' << c.max_step << ',';
    if (c.result) {
      const SolveDiagnostics& d = c.result->diagnostics;
      const double res = d.residual_history.empty() ? 0.0 : d.residual_history[d.returned_iteration];
      csv << (d.converged ? 1 : 0) << ',' << d.iterations << ',' << res << ',' << c.residuals->max_ode() << ','
          << c.residuals->max_jump() << ',' << c.diff_horizon << ',' << c.diff_level << ','
          << d.truncation.integral_tail_estimate << ',' << d.truncation.impulse_tail_estimate << ",\n";
      row.update({{"converged", d.converged},
                  {"iterations", d.iterations},
                  {"residual", num(res)},
                  {"max_ode", num(c.residuals->max_ode())},
                  {"max_jump", num(c.residuals->max_jump())},
                  {"diff_prev_horizon", num(c.diff_horizon)},
                  {"diff_prev_level", num(c.diff_level)},
                  {"truncation", truncation_json(d.truncation)}});
    } else {
      csv << ",,,,,,,,,\"" << c.error << "\"\n";
      row["error"] = c.error;
    }
    rows.push_back(row);
  }
  // monotone decrease of the horizon differences on the base level
  bool monotone = true;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < nh; ++i) {
    const double d = cells[i].diff_horizon;
    if (!(d < prev) && !(d == 0.0 && prev == 0.0)) monotone = false;
    prev = d;
  }
  write_json(r.out_dir / "study.json",
             {{"problem", r.file.problem.name}, {"cells", rows}, {"horizon_differences_decrease", monotone}});
  write_json(r.out_dir / "manifest.json", manifest_json(r, "study"));

  for (const Cell& c : cells) {
    out << "H=" << c.horizon << " step=" << c.max_step << ": ";
    if (c.result) {
      out << (c.result->diagnostics.converged ? "converged" : "not converged") << ", diff vs previous horizon "
          << c.diff_horizon << '\n';
    } else {
      out << "error: " << c.error << '\n';
    }
  }
  if (any_error) return kError;
  return all_converged ? kSuccess : kNotConverged;
}

}  // namespace halfline::cli
