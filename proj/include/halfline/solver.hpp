#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "halfline/fnspace.hpp"
#include "halfline/model.hpp"
#include "halfline/operator.hpp"

namespace halfline {

enum class InitialGuess { AffineBoundary, Zero, UserSupplied };

struct SolverConfig {
  std::size_t max_iter = 200;
  double tol = 1e-8;
  /// iterate <- (1 - damping) iterate + damping T(iterate)
  double damping = 1.0;
  std::size_t anderson_depth = 0;
  InitialGuess initial_guess = InitialGuess::AffineBoundary;
  std::optional<SolutionPair> user_guess;
  /// Iteration stops as non-converged once the residual exceeds this multiple of the first one.
  double divergence_factor = 1e8;

  void validate() const;
};

struct SolveDiagnostics {
  std::size_t iterations = 0;
  std::vector<double> residual_history;
  bool converged = false;
  bool diverged = false;
  /// Index (0-based) into residual_history of the returned iterate.
  std::size_t returned_iteration = 0;
  TruncationReport truncation;
  /// Geometric mean of the last (up to three) successive residual ratios.
  double contraction_estimate = 0.0;
};

struct SolveResult {
  SolutionPair solution;
  SolveDiagnostics diagnostics;
};

/// Damped Picard iteration for the fixed point of T, optionally Anderson-mixed.
/// Stops when ||T(s) - s||_X <= tol and returns that s; otherwise returns the
/// lowest-residual iterate with converged = false.
SolveResult solve(const ImpulsiveCoupledBVP& p, const SolverConfig& sc, const QuadratureConfig& qc);

struct ResidualReport {
  std::array<double, 2> ode_residual_sup{};   // u, v
  std::array<double, 4> jump_residual_sup{};  // I0, I1, J0, J1
  std::array<double, 4> boundary_residuals{}; // |u(0)-A1|, |v(0)-A2|, |u'(H)-B1|, |v'(H)-B2|
  /// Location of the largest ODE residual per equation.
  std::array<double, 2> ode_residual_at{};

  double max_ode() const;
  double max_jump() const;
};

/// Checks a candidate pair against the differential equations, impulse conditions and
/// boundary data, using only the pair and the problem. Second derivatives come from a
/// seven-point finite difference of the stored first derivatives on each smooth piece.
ResidualReport verify_residuals(const ImpulsiveCoupledBVP& p, const SolutionPair& s);

/// Weights for the first derivative at `x0` from values at `nodes` (Fornberg's recursion).
std::vector<double> first_derivative_weights(double x0, const std::vector<double>& nodes);

}  // namespace halfline
