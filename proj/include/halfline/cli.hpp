#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace halfline::cli {

/// Stable exit codes.
enum ExitCode : int { kSuccess = 0, kError = 1, kNotConverged = 2, kAuditFailed = 3 };

/// Command options as given on the command line. Unset values fall back to the manifest
/// (if any), then the problem file's "solver"/"quadrature" blocks, then library defaults.
struct RunOptions {
  std::string problem_path;
  std::optional<std::string> manifest_path;
  std::optional<std::filesystem::path> out_dir;

  std::optional<double> horizon, t0, tol, damping;
  std::optional<std::size_t> max_iter, anderson;
  std::optional<std::uint64_t> seed;

  // check
  std::optional<double> rho, rho1;
  std::optional<std::size_t> K, samples, ball_samples;
  std::optional<bool> self_consistent;

  // study
  std::optional<std::vector<double>> horizons;
  std::optional<std::size_t> mesh_levels;
};

/// Output directory: the option, else $HALFLINE_OUT_DIR, else ./halfline-out.
std::filesystem::path resolve_out_dir(const RunOptions& o);

/// Each command writes its artifacts plus manifest.json into the output directory,
/// prints a short summary to `out`, errors to `err`, and returns an ExitCode.
int cmd_solve(const RunOptions& o, std::ostream& out, std::ostream& err);
int cmd_check(const RunOptions& o, std::ostream& out, std::ostream& err);
int cmd_study(const RunOptions& o, std::ostream& out, std::ostream& err);

const char* version();

}  // namespace halfline::cli
