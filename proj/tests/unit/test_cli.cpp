#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "halfline/cli.hpp"
#include "json.hpp"

using namespace halfline::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kDir = std::string(HALFLINE_SOURCE_DIR) + "/problems/";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "halfline-cli-test" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

RunOptions opts(const std::string& problem, const fs::path& out) {
  RunOptions o;
  o.problem_path = problem;
  o.out_dir = out;
  return o;
}

}  // namespace

TEST_CASE("solve: zero problem writes the affine pair") {
  const auto dir = scratch("zero");
  std::ostringstream out, err;
  REQUIRE(cmd_solve(opts(kDir + "zero.json", dir), out, err) == kSuccess);
  for (const char* f : {"solution.csv", "solution.dat", "plot.gp", "diagnostics.json", "manifest.json"}) {
    CHECK(fs::exists(dir / f));
  }
  std::ifstream csv(dir / "solution.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line == "t,side,u,du,v,dv");
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    double t, u, du, v, dv;
    char side;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%c,%lf,%lf,%lf,%lf", &t, &side, &u, &du, &v, &dv) == 6);
    CHECK(u == doctest::Approx(1.0 + 0.5 * t).epsilon(1e-14));
    CHECK(v == doctest::Approx(-0.5 + 2.0 * t).epsilon(1e-14));
    CHECK(du == 0.5);
    CHECK(dv == 2.0);
    ++rows;
  }
  CHECK(rows > 100);
  const json d = read_json(dir / "diagnostics.json");
  CHECK(d["converged"] == true);
  CHECK(d["iterations"] == 1);
}

TEST_CASE("solve: manufactured problem meets the residual target") {
  const auto dir = scratch("manufactured");
  std::ostringstream out, err;
  REQUIRE(cmd_solve(opts(kDir + "manufactured.json", dir), out, err) == kSuccess);
  const json d = read_json(dir / "diagnostics.json");
  CHECK(d["residuals"]["max_ode"].get<double>() < 1e-6);
  CHECK(d["residuals"]["max_jump"].get<double>() < 1e-10);
}

TEST_CASE("solve: hitting max_iter exits 2") {
  auto o = opts(kDir + "manufactured.json", scratch("short"));
  o.max_iter = 1;
  std::ostringstream out, err;
  CHECK(cmd_solve(o, out, err) == kNotConverged);
}

TEST_CASE("solve: bad input exits 1 with a message") {
  std::ostringstream out, err;
  CHECK(cmd_solve(opts(kDir + "missing.json", scratch("missing")), out, err) == kError);
  CHECK(err.str().find("error:") != std::string::npos);

  auto o = opts(kDir + "zero.json", scratch("bad-tol"));
  o.tol = -1.0;
  CHECK(cmd_solve(o, out, err) == kError);
}

TEST_CASE("solve: runs are reproducible apart from the manifest timestamp") {
  const auto a = scratch("repro-a"), b = scratch("repro-b");
  std::ostringstream out, err;
  REQUIRE(cmd_solve(opts(kDir + "contraction.json", a), out, err) == kSuccess);
  REQUIRE(cmd_solve(opts(kDir + "contraction.json", b), out, err) == kSuccess);
  for (const char* f : {"solution.csv", "solution.dat", "diagnostics.json"}) CHECK(slurp(a / f) == slurp(b / f));
  json ma = read_json(a / "manifest.json"), mb = read_json(b / "manifest.json");
  ma.erase("timestamp");
  mb.erase("timestamp");
  CHECK(ma == mb);
}

TEST_CASE("solve: a manifest reproduces the run") {
  const auto a = scratch("manifest-a"), b = scratch("manifest-b");
  std::ostringstream out, err;
  auto o = opts(kDir + "contraction.json", a);
  o.tol = 1e-11;
  o.damping = 0.9;
  REQUIRE(cmd_solve(o, out, err) == kSuccess);
  RunOptions again;
  again.manifest_path = (a / "manifest.json").string();
  again.out_dir = b;
  REQUIRE(cmd_solve(again, out, err) == kSuccess);
  CHECK(slurp(a / "diagnostics.json") == slurp(b / "diagnostics.json"));
  CHECK(read_json(b / "manifest.json")["solver"]["damping"] == 0.9);
}

TEST_CASE("resolve_out_dir: option, then environment, then default") {
  RunOptions o;
  ::unsetenv("HALFLINE_OUT_DIR");
  CHECK(resolve_out_dir(o) == fs::path("halfline-out"));
  ::setenv("HALFLINE_OUT_DIR", "/tmp/from-env", 1);
  CHECK(resolve_out_dir(o) == fs::path("/tmp/from-env"));
  o.out_dir = "/tmp/from-flag";
  CHECK(resolve_out_dir(o) == fs::path("/tmp/from-flag"));
  ::unsetenv("HALFLINE_OUT_DIR");
}

TEST_CASE("check: zero problem passes with the closed-form radius") {
  const auto dir = scratch("check-zero");
  auto o = opts(kDir + "zero.json", dir);
  o.samples = 500;
  o.ball_samples = 20;
  std::ostringstream out, err;
  REQUIRE(cmd_check(o, out, err) == kSuccess);
  const json rep = read_json(dir / "hypothesis_report.json");
  CHECK(rep["summary"]["all_pass"] == true);
  // max(ρ1, |B1|, |B2|, K1, K2) = max(0, 0.5, 2, 1, 2)
  CHECK(rep["rho2"]["value"].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("check: a too-small bound exits 3 with violations") {
  const auto dir = scratch("check-bad");
  auto o = opts(kDir + "bad-bounds.json", dir);
  o.samples = 500;
  o.ball_samples = 10;
  std::ostringstream out, err;
  CHECK(cmd_check(o, out, err) == kAuditFailed);
  const json rep = read_json(dir / "hypothesis_report.json");
  CHECK(rep["summary"]["domination"] == false);
  CHECK(!rep["domination"]["violations"].empty());
}

TEST_CASE("check: a problem without bounds exits 1") {
  const auto dir = scratch("check-nobounds");
  const fs::path file = dir / "nobounds.json";
  std::ofstream(file) << R"({"name": "nobounds", "boundary": {"A1": 0, "A2": 0, "B1": 1, "B2": 0}})";
  std::ostringstream out, err;
  CHECK(cmd_check(opts(file.string(), dir), out, err) == kError);
  CHECK(err.str().find("missing bound") != std::string::npos);
}

TEST_CASE("study: zero problem has zero differences up to rounding") {
  const auto dir = scratch("study-zero");
  auto o = opts(kDir + "zero.json", dir);
  o.mesh_levels = 2;
  std::ostringstream out, err;
  REQUIRE(cmd_study(o, out, err) == kSuccess);
  const json s = read_json(dir / "study.json");
  CHECK(s["horizon_differences_decrease"] == true);
  for (const auto& cell : s["cells"]) {
    if (cell["diff_prev_horizon"].is_number()) CHECK(cell["diff_prev_horizon"].get<double>() == 0.0);
    // across mesh levels the affine pair is compared by Hermite interpolation between nodes
    if (cell["diff_prev_level"].is_number()) CHECK(cell["diff_prev_level"].get<double>() <= 1e-11);
  }
  CHECK(fs::exists(dir / "study.csv"));
}
