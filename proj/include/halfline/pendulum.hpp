#pragma once

#include <array>

#include "halfline/bounds.hpp"
#include "halfline/model.hpp"

namespace halfline {

/// Spring pendulum: u = l(t) the spring length, v = θ(t) the angle.
struct PendulumParams {
  double m = 1.0;
  double k = 1.0;
  double g = 9.8;
  double l0 = 1.0;
  std::array<double, 8> alpha{0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1};
  double beta = 3.0;
  double gamma = 3.0;
  double B1 = 0.5;
  double B2 = 0.5;
  /// Right-hand sides vanish on [0, t0).
  double t0 = 1.0;
  /// Asserted lower bound of the length on [t0, inf), used by the Ψ bound.
  double l_min = 0.5;

  /// Throws ValidationError on a violated invariant.
  void validate() const;
};

/// f = (x w - g cos y - (k/m)(x - l0)) / t^3, h = (-g x sin y - 2 x z w) / (x^2 t^3),
/// boundary (0, 0, B1, B2), t_k = k, τ_j = j, and the linear power-law impulse maps.
/// The attached bounds hold on states with x >= l_min.
ImpulsiveCoupledBVP build_pendulum_problem(const PendulumParams& pp);

/// (ρ²(1+t) + g + (k/m)(ρ(1+t) + l0)) / t³; domain_error for t < t0.
double pendulum_bound_Phi(const PendulumParams& pp, double rho, double t);

/// (gρ(1+t) + 2ρ³(1+t)) / (t³ l_min²); invalid_argument for l_min <= 0.
double pendulum_bound_Psi(const PendulumParams& pp, double rho, double t, double l_min);

CaratheodoryBounds pendulum_bounds(const PendulumParams& pp);

}  // namespace halfline
