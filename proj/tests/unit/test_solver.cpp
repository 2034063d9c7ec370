#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "halfline/errors.hpp"
#include "halfline/solver.hpp"

using namespace halfline;

TEST_CASE("solve: f = h = 0 converges in one iteration to the affine pair") {
  ImpulsiveCoupledBVP p;
  p.boundary = {1.0, -0.5, 0.5, 2.0};
  const auto r = solve(p, SolverConfig{}, QuadratureConfig{});
  CHECK(r.diagnostics.converged);
  CHECK(r.diagnostics.iterations == 1);
  CHECK(r.diagnostics.residual_history.front() == 0.0);
  const auto m = build_meshes(p, QuadratureConfig{});
  CHECK(distance_X(r.solution, affine_pair(p, m)) == 0.0);
}

TEST_CASE("solve: linear contraction rate matches the spectral radius") {
  for (double c : {0.1, 0.25, 0.5}) {
    SolverConfig sc;
    sc.tol = 1e-13;
    const auto r = solve(fixtures::linear_problem(c), sc, QuadratureConfig{});
    const double predicted = 4.0 * c / (fixtures::kBesselJ0FirstZero * fixtures::kBesselJ0FirstZero);
    CHECK(r.diagnostics.converged);
    CHECK(r.diagnostics.contraction_estimate == doctest::Approx(predicted).epsilon(0.2));
  }
}

TEST_CASE("solve: sine problem decays geometrically below 1") {
  SolverConfig sc;
  sc.tol = 1e-13;
  const auto r = solve(fixtures::sine_problem(0.25), sc, QuadratureConfig{});
  REQUIRE(r.diagnostics.converged);
  const auto& h = r.diagnostics.residual_history;
  REQUIRE(h.size() >= 5);
  for (std::size_t i = 1; i < h.size(); ++i) CHECK(h[i] < h[i - 1]);
  CHECK(r.diagnostics.contraction_estimate < 0.25);
  CHECK(r.diagnostics.contraction_estimate > 0.0);
}

TEST_CASE("solve: manufactured impulsive problem") {
  const auto p = fixtures::manufactured_problem();
  QuadratureConfig q;
  q.tail_bound_fn = [](double t) { return std::exp(-t); };
  const auto r = solve(p, SolverConfig{}, q);
  REQUIRE(r.diagnostics.converged);
  CHECK(r.diagnostics.iterations <= 50);
  CHECK(distance_component(r.solution.u, fixtures::manufactured_exact(r.solution.u.mesh_ptr())) < 1e-5);
  const auto rr = verify_residuals(p, r.solution);
  CHECK(rr.max_ode() < 1e-6);
  CHECK(rr.max_jump() < 1e-10);
}

TEST_CASE("verify_residuals: exact solution, corrupted jump, affine pair") {
  const auto p = fixtures::manufactured_problem();
  const auto m = build_meshes(p, QuadratureConfig{});
  const SolutionPair exact{fixtures::manufactured_exact(m.u), PiecewiseC1Function::zero(m.v)};
  const auto good = verify_residuals(p, exact);
  CHECK(good.max_ode() < 1e-6);
  CHECK(good.max_jump() < 1e-14);
  CHECK(good.boundary_residuals[0] < 1e-14);
  CHECK(good.boundary_residuals[2] < 1e-14);

  const SolutionPair bad{apply_jump(exact.u, 1.0, 0.1, 0.0), exact.v};
  CHECK(verify_residuals(p, bad).jump_residual_sup[0] == doctest::Approx(0.1));

  ImpulsiveCoupledBVP z;
  z.boundary = {1.0, 2.0, 3.0, 4.0};
  const auto zm = build_meshes(z, QuadratureConfig{});
  const auto aff = verify_residuals(z, affine_pair(z, zm));
  CHECK(aff.max_ode() == 0.0);
  CHECK(aff.max_jump() == 0.0);
}

TEST_CASE("solve: plain Picard equals repeated apply_T") {
  const auto p = fixtures::sine_problem(0.25);
  const QuadratureConfig q;
  SolverConfig sc;
  sc.tol = 1e-300;
  sc.max_iter = 5;
  const auto r = solve(p, sc, q);
  REQUIRE(r.diagnostics.returned_iteration == 4);
  const auto m = build_meshes(p, q);
  SolutionPair s = affine_pair(p, m);
  for (int i = 0; i < 4; ++i) s = apply_T(p, s, q).value;
  for (std::size_t j = 0; j < m.u->slot_count(); ++j) {
    CHECK(r.solution.u.value(j) == s.u.value(j));
    CHECK(r.solution.u.deriv(j) == s.u.deriv(j));
  }
}

TEST_CASE("solve: the returned pair is a fixed point to within tol") {
  const auto p = fixtures::sine_problem(0.25);
  const QuadratureConfig q;
  SolverConfig sc;
  sc.anderson_depth = 2;
  const auto r = solve(p, sc, q);
  REQUIRE(r.diagnostics.converged);
  CHECK(distance_X(apply_T(p, r.solution, q).value, r.solution) <= sc.tol * (1 + 1e-9));
}

TEST_CASE("solve: non-convergence returns the lowest-residual iterate") {
  const auto p = fixtures::linear_problem(0.5);
  SolverConfig sc;
  sc.max_iter = 3;
  const auto r = solve(p, sc, QuadratureConfig{});
  CHECK_FALSE(r.diagnostics.converged);
  const auto& h = r.diagnostics.residual_history;
  CHECK(h[r.diagnostics.returned_iteration] == *std::min_element(h.begin(), h.end()));
}

TEST_CASE("solve: evaluation errors carry the iteration") {
  ImpulsiveCoupledBVP p;
  p.boundary = {0.0, 0.0, 1.0, 0.0};
  // finite on the initial line, non-finite once u bends below it
  p.f.eval = [](double t, double x, double, double, double) { return x < t - 1e-3 ? std::nan("") : std::exp(-t); };
  try {
    solve(p, SolverConfig{}, QuadratureConfig{});
    FAIL("expected EvaluationError");
  } catch (const EvaluationError& e) {
    REQUIRE(e.iteration());
    CHECK(*e.iteration() == 1);
  }
}

TEST_CASE("config validation") {
  SolverConfig sc;
  sc.damping = 0.0;
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
  sc = SolverConfig{};
  sc.initial_guess = InitialGuess::UserSupplied;
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
  QuadratureConfig q;
  q.abs_tol = 0.0;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
}

TEST_CASE("first_derivative_weights: exact on polynomials") {
  const std::vector<double> nodes{0.0, 0.1, 0.25, 0.3, 0.5};
  const auto w = first_derivative_weights(0.2, nodes);
  double d = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) d += w[i] * std::pow(nodes[i], 4);
  CHECK(d == doctest::Approx(4 * std::pow(0.2, 3)).epsilon(1e-10));
}
