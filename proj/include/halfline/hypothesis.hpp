#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "halfline/bounds.hpp"
#include "halfline/model.hpp"
#include "halfline/operator.hpp"

namespace halfline {

struct DominationViolation {
  char which;  // 'f' or 'h'
  double t, x, y, z, w;
  double value;  // |f| or |h|
  double bound;  // Φ_ρ(t) or Ψ_ρ(t)
};

struct DominationOptions {
  std::size_t samples = 10'000;
  std::uint64_t seed = 0;
  /// Upper end of the sampled time window [t0, t_max].
  double t_max = 40.0;
};

struct DominationResult {
  std::vector<DominationViolation> violations;
  std::size_t tested = 0;
  /// Draws rejected by the bounds' admissible-state predicate.
  std::size_t rejected = 0;
};

/// Samples (t, x, y, z, w) with |x|, |y| < ρ(1+t), |z|, |w| < ρ and checks |f| <= Φ_ρ(t),
/// |h| <= Ψ_ρ(t). A non-finite value or bound counts as a violation; a missing Φ or Ψ
/// throws std::invalid_argument naming the member.
DominationResult check_domination(const ImpulsiveCoupledBVP& p, const CaratheodoryBounds& b, double rho,
                                  const DominationOptions& options = {});

enum class ImpulseFamily : int { I0 = 0, I1 = 1, J0 = 2, J1 = 3 };
const char* family_name(ImpulseFamily f);

struct ImpulseViolation {
  ImpulseFamily family;
  std::size_t k;
  double point, a, b;
  double value;
  double bound;
};

struct SequenceSummary {
  double partial_sum = 0.0;              // Σ_{k<=K} χ_{k,ρ}
  std::vector<std::pair<std::size_t, double>> checkpoints;  // (K', Σ_{k<=K'})
  std::optional<double> tail;            // bound or estimate of Σ_{k>K}
  bool tail_is_bound = false;
  bool present = false;                  // sequence supplied
};

struct ImpulseBoundResult {
  std::vector<ImpulseViolation> violations;
  std::array<SequenceSummary, 4> sequences;  // indexed by ImpulseFamily
  std::size_t points_checked = 0;
};

struct ImpulseBoundOptions {
  std::size_t samples_per_point = 4;
  std::uint64_t seed = 0;
};

/// For k <= K checks |I0k| <= φ_{k,ρ}, |I1k| <= ψ_{k,ρ}, |J0j| <= φ_{j,ρ}, |J1j| <= ϑ_{j,ρ}
/// on sampled arguments |a| < ρ(1 + p_k), |b| < ρ (random draws plus box corners) and
/// accumulates partial sums and tails of the bound sequences.
ImpulseBoundResult check_impulse_bounds(const ImpulsiveCoupledBVP& p, const CaratheodoryBounds& b, double rho,
                                        std::size_t K, const ImpulseBoundOptions& options = {});

struct Rho2Result {
  double rho2 = 0.0;
  /// ρ1; K1 + Σφ + 2Σψ + ∫QΦ; K2 + Σφj + 2Σϑ + ∫QΨ; |B1| + 2Σψ + ∫Φ; |B2| + 2Σϑ + ∫Ψ.
  std::array<double, 5> terms{};
  double K1 = 0.0, K2 = 0.0;
  std::array<double, 4> sums{};  // truncated sums plus tails, by family
  double int_Q_Phi = 0.0, int_Q_Psi = 0.0, int_Phi = 0.0, int_Psi = 0.0;
  /// Some truncated mass was neither bounded nor negligible (> abs_tol).
  bool lower_estimate = false;
  std::vector<std::string> notes;
};

/// The ball radius ρ2 as the max of the five quantities listed under `terms`. A bound
/// member needed for a non-empty family throws std::invalid_argument naming it.
Rho2Result compute_rho2(const ImpulsiveCoupledBVP& p, const CaratheodoryBounds& b, double rho1, double rho,
                        std::size_t K, const QuadratureConfig& q);

struct BallInvarianceResult {
  std::size_t tested = 0;
  std::size_t inside = 0;
  std::size_t rejected = 0;  // draws outside the admissible-state region
  double max_image_norm = 0.0;
  std::vector<double> failing_image_norms;
};

struct BallOptions {
  /// Admissible samples to test; at most 10x as many radii are drawn.
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  /// Spacing of the random derivative knots.
  double knot_spacing = 1.0;
  /// Relative slack on the inside test, ||T s|| <= ρ2 (1 + slack).
  double slack = 1e-12;
  /// Draw u with u >= u_lower on [t0, H] (for bounds that presume a positive first state).
  std::optional<double> u_lower;
};

/// Draws pairs with ||s||_X <= ρ2 (random derivative walks with jumps at the impulse nodes,
/// scaled to a random radius in (0, ρ2]), applies T and counts ||T s||_X <= ρ2.
BallInvarianceResult check_ball_invariance(const ImpulsiveCoupledBVP& p, const CaratheodoryBounds& b, double rho2,
                                           const QuadratureConfig& qc,
                                           const BallOptions& options = {});

/// Random pair on the problem meshes with ||s||_X == radius. Each component has a
/// piecewise-linear random derivative (knots every `knot_spacing`) integrated exactly, plus
/// random value and derivative jumps at its impulse nodes. With `u_lower`, u is drawn
/// nondecreasing from u_lower upward and the norm is matched by bisection (<= radius);
/// nullopt if even the floor alone exceeds the radius.
std::optional<SolutionPair> random_ball_element(const ProblemMeshes& meshes, double radius, std::uint64_t seed,
                                                std::uint64_t index, double knot_spacing = 1.0,
                                                std::optional<double> u_lower = std::nullopt);

}  // namespace halfline
