#pragma once

#include <cmath>
#include <memory>

#include "halfline/fnspace.hpp"
#include "halfline/model.hpp"

namespace halfline::fixtures {

inline bool after(double t, Side s, double p) { return t > p || (t == p && s == Side::Right); }

/// u'' = e^{-t}, u(0) = 2, u'(inf) = 0.8, +0.5 in value at t = 1, -0.2 in slope at t = 2.
/// Exact solution u = 1 + t + e^{-t} + 0.5 [t > 1] - 0.2 (t - 2) [t > 2]; v = 0.
inline ImpulsiveCoupledBVP manufactured_problem() {
  ImpulsiveCoupledBVP p;
  p.name = "manufactured";
  p.f.eval = [](double t, double, double, double, double) { return std::exp(-t); };
  p.f.name = "exp(-t)";
  p.boundary = {2.0, 0.0, 0.8, 0.0};
  p.u_schedule = ImpulseSchedule::from_points({1.0, 2.0});
  p.I0.eval = [](std::size_t k, double, double, double) { return k == 1 ? 0.5 : 0.0; };
  p.I1.eval = [](std::size_t k, double, double, double) { return k == 2 ? -0.2 : 0.0; };
  return p;
}

inline PiecewiseC1Function manufactured_exact(const std::shared_ptr<const Mesh>& mesh) {
  return PiecewiseC1Function::sample(
      mesh,
      [](double t, Side s) {
        return 1.0 + t + std::exp(-t) + (after(t, s, 1.0) ? 0.5 : 0.0) - (after(t, s, 2.0) ? 0.2 * (t - 2.0) : 0.0);
      },
      [](double t, Side s) { return 1.0 - std::exp(-t) - (after(t, s, 2.0) ? 0.2 : 0.0); }, 0.8);
}

/// u'' = c e^{-t} sin(u), u(0) = 1, u'(inf) = 0.
inline ImpulsiveCoupledBVP sine_problem(double c) {
  ImpulsiveCoupledBVP p;
  p.name = "sine";
  p.f.eval = [c](double t, double x, double, double, double) { return c * std::exp(-t) * std::sin(x); };
  p.boundary = {1.0, 0.0, 0.0, 0.0};
  return p;
}

/// u'' = c e^{-t} u, u(0) = 1: the Picard rate is the spectral radius 4c / j_{0,1}^2.
inline ImpulsiveCoupledBVP linear_problem(double c) {
  ImpulsiveCoupledBVP p;
  p.name = "linear";
  p.f.eval = [c](double t, double x, double, double, double) { return c * std::exp(-t) * x; };
  p.boundary = {1.0, 0.0, 0.0, 0.0};
  return p;
}

constexpr double kBesselJ0FirstZero = 2.404825557695773;

}  // namespace halfline::fixtures
