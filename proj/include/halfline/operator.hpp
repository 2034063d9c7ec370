#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "halfline/fnspace.hpp"
#include "halfline/model.hpp"

namespace halfline {

/// Discretization of the half-line integrals. The mesh intervals double as quadrature
/// panels: every smooth piece between breakpoints (t0, impulse points of either
/// component, horizon) is split into at least `panels_per_piece` panels of length at
/// most `max_step`, each integrated with a `gauss_points`-point Gauss-Legendre rule.
struct QuadratureConfig {
  double horizon = 40.0;
  std::size_t panels_per_piece = 16;
  double max_step = 0.05;
  std::size_t gauss_points = 8;
  double abs_tol = 1e-8;
  /// Optional t -> upper bound of ∫_t^∞ |integrand|, used for both components.
  std::function<double(double t)> tail_bound_fn;

  void validate() const;
};

/// Nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  static const GaussRule& legendre(std::size_t n);
};

struct TruncationReport {
  double integral_tail_estimate = 0.0;
  double impulse_tail_estimate = 0.0;
  std::size_t K_used = 0;
  bool integral_tail_is_bound = true;
  bool impulse_tail_is_bound = true;
  /// Set when a tail estimate is not backed by a bound and exceeds abs_tol.
  bool warning = false;

  static TruncationReport merge(const TruncationReport& a, const TruncationReport& b);
};

struct ComponentResult {
  PiecewiseC1Function value;
  TruncationReport truncation;
};

struct OperatorResult {
  SolutionPair value;
  TruncationReport truncation;
};

struct ProblemMeshes {
  std::shared_ptr<const Mesh> u;
  std::shared_ptr<const Mesh> v;
};

/// Meshes for u and v sharing their base times; each is doubled at its own impulse points.
ProblemMeshes build_meshes(const ImpulsiveCoupledBVP& p, const QuadratureConfig& q);

/// (A1 + B1 t, A2 + B2 t): the fixed point of T when f, h and every impulse vanish.
SolutionPair affine_pair(const ImpulsiveCoupledBVP& p, const ProblemMeshes& meshes);
SolutionPair zero_pair(const ProblemMeshes& meshes);

/// First component of the fixed-point operator,
///   T1(t) = A1 + B1 t + Σ_{t_k<t} [I0k + I1k (t - t_k)] - t Σ_k I1k + ∫ G(t,s) f ds,
///   T1'(t) = B1 - Σ_{t_k>=t} I1k - ∫_t^H f ds,
/// with sums over impulse points below the horizon and the integral over [t0, H].
/// The jumps at impulse points are inserted algebraically.
ComponentResult apply_T1(const ImpulsiveCoupledBVP& p, const SolutionPair& s, const QuadratureConfig& q);
ComponentResult apply_T2(const ImpulsiveCoupledBVP& p, const SolutionPair& s, const QuadratureConfig& q);
OperatorResult apply_T(const ImpulsiveCoupledBVP& p, const SolutionPair& s, const QuadratureConfig& q);

/// ∫_{lower}^{H} g(s) ds with panels split at t (the kernel kink) and at `breakpoints`.
/// The tail beyond H is not included. Throws EvaluationError on a non-finite sample.
double semiinfinite_integral(const std::function<double(double)>& g, double t, const QuadratureConfig& q,
                             std::span<const double> breakpoints = {}, double lower = 0.0);

struct ImpulseSums {
  double partial_sum_at_t;  // Σ_{p_k<t} [m0 + m1 (t - p_k)]
  double full_sum_deriv;    // Σ_{p_k<H} m1
};

/// Impulse sums of the integral representation, arguments (p_k, x(p_k-), x'(p_k-)).
ImpulseSums impulse_sums(const ImpulseSchedule& schedule, const ImpulseMap& m0, const ImpulseMap& m1,
                         const PiecewiseC1Function& x, double t, double horizon);

}  // namespace halfline
