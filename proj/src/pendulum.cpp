#include "halfline/pendulum.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "halfline/errors.hpp"

namespace halfline {

void PendulumParams::validate() const {
  auto fail = [](const std::string& msg) { throw ValidationError("pendulum: " + msg); };
  if (!(m > 0.0)) fail("m must be > 0");
  if (!(k >= 0.0)) fail("k must be >= 0");
  if (!(g >= 0.0)) fail("g must be >= 0");
  if (!(l0 > 0.0)) fail("l0 must be > 0");
  if (!(beta >= 3.0)) fail("beta must be >= 3");
  if (!(gamma >= 3.0)) fail("gamma must be >= 3");
  const double pi = std::numbers::pi;
  if (!(B1 >= 0.0 && B1 <= pi)) fail("B1 must lie in [0, pi]");
  if (!(B2 >= 0.0 && B2 <= pi)) fail("B2 must lie in [0, pi]");
  if (!(t0 > 0.0) || !std::isfinite(t0)) fail("t0 must be > 0 (the right-hand sides are singular at t = 0)");
  if (!(l_min > 0.0)) fail("l_min must be > 0");
  for (double a : alpha) {
    if (!std::isfinite(a)) fail("alpha must be finite");
  }
}

double pendulum_bound_Phi(const PendulumParams& pp, double rho, double t) {
  if (t < pp.t0) throw std::domain_error("pendulum_bound_Phi: t below t0");
  const double km = pp.k / pp.m;
  return (rho * rho * (1.0 + t) + pp.g + km * (rho * (1.0 + t) + pp.l0)) / (t * t * t);
}

double pendulum_bound_Psi(const PendulumParams& pp, double rho, double t, double l_min) {
  if (!(l_min > 0.0)) throw std::invalid_argument("pendulum_bound_Psi: l_min must be > 0");
  if (!(t > 0.0)) throw std::domain_error("pendulum_bound_Psi: t must be positive");
  return (pp.g * rho * (1.0 + t) + 2.0 * rho * rho * rho * (1.0 + t)) / (t * t * t * l_min * l_min);
}

CaratheodoryBounds pendulum_bounds(const PendulumParams& pp) {
  pp.validate();
  CaratheodoryBounds b;
  b.Phi = [pp](double rho, double t) { return pendulum_bound_Phi(pp, rho, t); };
  b.Psi = [pp](double rho, double t) { return pendulum_bound_Psi(pp, rho, t, pp.l_min); };
  // ∫_t^∞ (a(1+s) + c)/s³ ds = (a + c)/(2t²) + a/t
  b.Phi_tail = [pp](double rho, double t) {
    const double km = pp.k / pp.m;
    const double a = rho * rho + km * rho;
    const double c = pp.g + km * pp.l0;
    return (a + c) / (2.0 * t * t) + a / t;
  };
  b.Psi_tail = [pp](double rho, double t) {
    const double c = (pp.g * rho + 2.0 * rho * rho * rho) / (pp.l_min * pp.l_min);
    return c * (1.0 / (2.0 * t * t) + 1.0 / t);
  };
  const auto& al = pp.alpha;
  b.phi_seq = power_law_sequence(al[0], al[1], 3.0);
  b.psi_seq = power_law_sequence(al[2], al[3], pp.beta);
  b.phij_seq = power_law_sequence(al[4], al[5], pp.gamma);
  b.thetaj_seq = power_law_sequence(al[6], al[7], 3.0);
  b.phi_tail = power_law_tail(al[0], al[1], 3.0);
  b.psi_tail = power_law_tail(al[2], al[3], pp.beta);
  b.phij_tail = power_law_tail(al[4], al[5], pp.gamma);
  b.thetaj_tail = power_law_tail(al[6], al[7], 3.0);
  const double l_min = pp.l_min;
  b.admissible = [l_min](double, double x, double, double, double) { return x >= l_min; };
  std::ostringstream d;
  d << "x >= l_min = " << l_min;
  b.admissible_description = d.str();
  return b;
}

namespace {

ImpulseMap linear_map(double a, double b, double exponent, const char* name) {
  ImpulseMap m;
  m.eval = [a, b, exponent](std::size_t k, double, double x, double dx) {
    return (a * x + b * dx) / std::pow(static_cast<double>(k), exponent);
  };
  m.name = name;
  return m;
}

}  // namespace

ImpulsiveCoupledBVP build_pendulum_problem(const PendulumParams& pp) {
  pp.validate();
  ImpulsiveCoupledBVP p;
  p.name = "spring-pendulum";
  const double g = pp.g, km = pp.k / pp.m, l0 = pp.l0;
  p.f.eval = [g, km, l0](double t, double x, double y, double, double w) {
    return (x * w - g * std::cos(y) - km * (x - l0)) / (t * t * t);
  };
  p.f.name = "spring-pendulum length equation";
  p.h.eval = [g](double t, double x, double y, double z, double w) {
    return (-g * x * std::sin(y) - 2.0 * x * z * w) / (x * x) / (t * t * t);
  };
  p.h.name = "spring-pendulum angle equation";
  p.boundary = {0.0, 0.0, pp.B1, pp.B2};
  p.u_schedule = ImpulseSchedule::arithmetic(1.0, 1.0);
  p.v_schedule = ImpulseSchedule::arithmetic(1.0, 1.0);
  const auto& al = pp.alpha;
  p.I0 = linear_map(al[0], al[1], 3.0, "I0");
  p.I1 = linear_map(al[2], al[3], pp.beta, "I1");
  p.J0 = linear_map(al[4], al[5], pp.gamma, "J0");
  p.J1 = linear_map(al[6], al[7], 3.0, "J1");
  p.t0 = pp.t0;
  p.bounds = std::make_shared<const CaratheodoryBounds>(pendulum_bounds(pp));
  return p;
}

}  // namespace halfline
