#include <iostream>

#include "CLI11.hpp"
#include "halfline/cli.hpp"

namespace {

template <class T>
void opt(CLI::App& app, const char* name, std::optional<T>& target, const char* help) {
  app.add_option_function<T>(name, [&target](const T& v) { target = v; }, help);
}

void add_common(CLI::App& cmd, halfline::cli::RunOptions& o) {
  cmd.add_option("problem", o.problem_path, "Problem JSON file (optional with --manifest)");
  opt(cmd, "--manifest", o.manifest_path, "Re-run with the settings of a previous manifest.json");
  cmd.add_option_function<std::string>("--out-dir", [&o](const std::string& d) { o.out_dir = d; },
                                       "Output directory (default $HALFLINE_OUT_DIR or ./halfline-out)");
  opt(cmd, "--horizon", o.horizon, "Truncation horizon H");
  opt(cmd, "--t0", o.t0, "Start of the working domain");
  opt(cmd, "--tol", o.tol, "Fixed-point residual tolerance");
  opt(cmd, "--max-iter", o.max_iter, "Iteration limit");
  opt(cmd, "--damping", o.damping, "Picard damping in (0, 1]");
  opt(cmd, "--anderson", o.anderson, "Anderson mixing depth (0 = plain Picard)");
  opt(cmd, "--seed", o.seed, "Seed for all sampling");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Impulsive coupled boundary-value problems on the half-line"};
  app.set_version_flag("--version", halfline::cli::version());
  app.require_subcommand(1);
  halfline::cli::RunOptions o;

  CLI::App* solve = app.add_subcommand("solve", "Solve by fixed-point iteration and write the solution");
  add_common(*solve, o);

  CLI::App* check = app.add_subcommand("check", "Audit the existence hypotheses");
  add_common(*check, o);
  opt(*check, "--rho", o.rho, "State-ball radius for the bounds");
  opt(*check, "--rho1", o.rho1, "Lower radius entering rho2");
  opt(*check, "--K", o.K, "Impulse truncation index");
  opt(*check, "--samples", o.samples, "Domination samples");
  opt(*check, "--ball-samples", o.ball_samples, "Ball-invariance samples");
  check->add_flag_function("--self-consistent", [&o](std::int64_t) { o.self_consistent = true; },
                           "Iterate rho <- rho2(rho) before auditing");

  CLI::App* study = app.add_subcommand("study", "Horizon and mesh refinement study");
  add_common(*study, o);
  opt(*study, "--horizons", o.horizons, "Horizons to compare, in order");
  opt(*study, "--mesh-levels", o.mesh_levels, "Number of mesh halvings (1 = base mesh only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : halfline::cli::kError;
  }
  if (*solve) return halfline::cli::cmd_solve(o, std::cout, std::cerr);
  if (*check) return halfline::cli::cmd_check(o, std::cout, std::cerr);
  return halfline::cli::cmd_study(o, std::cout, std::cerr);
}
