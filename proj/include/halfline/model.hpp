#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "halfline/bounds.hpp"

namespace halfline {

/// Right-hand side g(t, x, y, z, w) with (x, y, z, w) = (u, v, u', v').
/// The callable must be pure: it is invoked concurrently and repeatedly.
struct RhsFunction {
  std::function<double(double t, double x, double y, double z, double w)> eval;
  std::string name = "unnamed";

  double operator()(double t, double x, double y, double z, double w) const {
    return eval(t, x, y, z, w);
  }

  static RhsFunction zero();
};

struct BoundaryData {
  double A1 = 0.0;  // u(0)
  double A2 = 0.0;  // v(0)
  double B1 = 0.0;  // u'(+inf)
  double B2 = 0.0;  // v'(+inf)

  bool finite() const;
};

/// Impulse times, either an explicit finite list or a rule k -> p_k for k = 1, 2, ...
/// Rule-based schedules are enumerated lazily below a horizon.
class ImpulseSchedule {
 public:
  using Rule = std::function<double(std::size_t k)>;

  ImpulseSchedule() = default;

  static ImpulseSchedule none();
  static ImpulseSchedule from_points(std::vector<double> points);
  static ImpulseSchedule from_rule(Rule rule, std::string description);
  /// p_k = start + (k - 1) * step.
  static ImpulseSchedule arithmetic(double start, double step);

  bool is_rule() const noexcept { return static_cast<bool>(rule_); }
  const std::string& description() const noexcept { return description_; }

  /// The k-th point (1-based), or nullopt past the end of a finite list.
  std::optional<double> point(std::size_t k) const;

  /// Points p_k < horizon in index order. Enumeration of a rule stops at the first
  /// point >= horizon; `max_points` guards against rules that never reach it.
  std::vector<double> points_below(double horizon, std::size_t max_points = 10'000'000) const;
  std::size_t count_below(double horizon) const { return points_below(horizon).size(); }

  /// Points with horizon <= p_k < upper, together with their 1-based indices.
  std::vector<std::pair<std::size_t, double>> points_between(double horizon, double upper,
                                                             std::size_t max_points = 10'000'000) const;

 private:
  std::vector<double> points_;
  Rule rule_;
  std::string description_ = "none";
};

/// Jump size m(k, p, a, b) at the k-th impulse time p, given the left limits
/// a = x(p-) and b = x'(p-).
struct ImpulseMap {
  std::function<double(std::size_t k, double p, double a, double b)> eval;
  std::string name = "unnamed";

  double operator()(std::size_t k, double p, double a, double b) const { return eval(k, p, a, b); }

  static ImpulseMap zero();
};

/// The impulsive coupled boundary-value problem on [0, inf):
///   u'' = f(t, u, v, u', v'),  t != t_k
///   v'' = h(t, u, v, u', v'),  t != tau_j
///   u(0) = A1, v(0) = A2, u'(inf) = B1, v'(inf) = B2
///   Δu(t_k) = I0, Δu'(t_k) = I1, Δv(tau_j) = J0, Δv'(tau_j) = J1.
/// Right-hand sides are taken to vanish on [0, t0), which makes a singular
/// coefficient near t = 0 tractable while keeping the Green's-function origin at 0.
struct ImpulsiveCoupledBVP {
  std::string name = "problem";
  RhsFunction f = RhsFunction::zero();
  RhsFunction h = RhsFunction::zero();
  BoundaryData boundary;
  ImpulseSchedule u_schedule = ImpulseSchedule::none();
  ImpulseSchedule v_schedule = ImpulseSchedule::none();
  ImpulseMap I0 = ImpulseMap::zero();
  ImpulseMap I1 = ImpulseMap::zero();
  ImpulseMap J0 = ImpulseMap::zero();
  ImpulseMap J1 = ImpulseMap::zero();
  double t0 = 0.0;
  std::shared_ptr<const CaratheodoryBounds> bounds;
};

struct ValidationCheck {
  std::string name;
  bool passed = true;
  bool hard = false;  // a failed hard check makes the problem unusable
  std::string detail;
  std::vector<double> locations;
  std::size_t count = 0;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  /// No hard check failed.
  bool usable() const;
  bool all_passed() const;
  const ValidationCheck* find(const std::string& name) const;
};

struct ValidationOptions {
  std::uint64_t seed = 0;
  std::size_t function_samples = 200;
  std::size_t impulse_points_checked = 50;
  double continuity_step = 1e-7;
};

ValidationReport validate_problem(const ImpulsiveCoupledBVP& p, double horizon,
                                  const ValidationOptions& options = {});

}  // namespace halfline
