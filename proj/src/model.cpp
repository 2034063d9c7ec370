#include "halfline/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "halfline/errors.hpp"
#include "halfline/random.hpp"

namespace halfline {

RhsFunction RhsFunction::zero() {
  return {[](double, double, double, double, double) { return 0.0; }, "zero"};
}

ImpulseMap ImpulseMap::zero() {
  return {[](std::size_t, double, double, double) { return 0.0; }, "zero"};
}

bool BoundaryData::finite() const {
  return std::isfinite(A1) && std::isfinite(A2) && std::isfinite(B1) && std::isfinite(B2);
}

ImpulseSchedule ImpulseSchedule::none() { return {}; }

ImpulseSchedule ImpulseSchedule::from_points(std::vector<double> points) {
  ImpulseSchedule s;
  s.points_ = std::move(points);
  s.description_ = "points";
  return s;
}

ImpulseSchedule ImpulseSchedule::from_rule(Rule rule, std::string description) {
  ImpulseSchedule s;
  s.rule_ = std::move(rule);
  s.description_ = std::move(description);
  return s;
}

ImpulseSchedule ImpulseSchedule::arithmetic(double start, double step) {
  if (!(start > 0.0) || !(step > 0.0)) {
    throw ValidationError("arithmetic schedule needs start > 0 and step > 0");
  }
  std::ostringstream d;
  d << "arithmetic(start=" << start << ", step=" << step << ")";
  return from_rule([start, step](std::size_t k) { return start + static_cast<double>(k - 1) * step; },
                   d.str());
}

std::optional<double> ImpulseSchedule::point(std::size_t k) const {
  if (k == 0) return std::nullopt;
  if (rule_) return rule_(k);
  if (k > points_.size()) return std::nullopt;
  return points_[k - 1];
}

std::vector<double> ImpulseSchedule::points_below(double horizon, std::size_t max_points) const {
  std::vector<double> out;
  if (!rule_) {
    for (double p : points_) {
      if (p < horizon) out.push_back(p);
    }
    return out;
  }
  for (std::size_t k = 1;; ++k) {
    const double p = rule_(k);
    if (!(p < horizon)) break;
    if (out.size() >= max_points) {
      throw ValidationError("impulse rule '" + description_ +
                            "' produced too many points below the horizon");
    }
    out.push_back(p);
  }
  return out;
}

std::vector<std::pair<std::size_t, double>> ImpulseSchedule::points_between(
    double horizon, double upper, std::size_t max_points) const {
  std::vector<std::pair<std::size_t, double>> out;
  if (!rule_) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (points_[i] >= horizon && points_[i] < upper) out.emplace_back(i + 1, points_[i]);
    }
    return out;
  }
  for (std::size_t k = 1;; ++k) {
    const double p = rule_(k);
    if (!(p < upper)) break;
    if (p >= horizon) {
      if (out.size() >= max_points) break;
      out.emplace_back(k, p);
    }
    if (k > max_points * 4) break;
  }
  return out;
}

bool ValidationReport::usable() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const ValidationCheck& c) { return c.hard && !c.passed; });
}

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

ValidationCheck check_schedule(const std::string& name, const ImpulseSchedule& schedule,
                               double t0, double horizon) {
  ValidationCheck c{name, true, true, "", {}, 0};
  std::vector<double> pts;
  try {
    pts = schedule.points_below(horizon);
  } catch (const ValidationError& e) {
    c.passed = false;
    c.detail = e.what();
    return c;
  }
  c.count = pts.size();
  std::ostringstream detail;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double p = pts[i];
    const std::size_t index = i + 1;
    if (!std::isfinite(p) || p <= 0.0) {
      c.passed = false;
      c.locations.push_back(static_cast<double>(index));
      detail << "point " << index << " is not a positive time; ";
    } else if (p < t0) {
      c.passed = false;
      c.locations.push_back(static_cast<double>(index));
      detail << "point " << index << " lies below the working-domain cutoff t0; ";
    }
    if (i > 0 && !(p > pts[i - 1])) {
      c.passed = false;
      c.locations.push_back(static_cast<double>(index));
      detail << "not strictly increasing at index " << index << "; ";
    }
  }
  if (c.passed) {
    detail << pts.size() << " points below horizon";
  }
  c.detail = detail.str();
  return c;
}

ValidationCheck check_rhs(const std::string& name, const RhsFunction& g, double t0, double horizon,
                          const ValidationOptions& opt, std::uint64_t stream) {
  ValidationCheck c{name, true, false, "", {}, 0};
  const std::size_t n = std::max<std::size_t>(opt.function_samples, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t0 + (horizon - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
    SampleStream rng(opt.seed, stream, i);
    const double x = rng.symmetric(1.0) * (1.0 + t);
    const double y = rng.symmetric(1.0) * (1.0 + t);
    const double z = rng.symmetric(1.0);
    const double w = rng.symmetric(1.0);
    const double value = g(t, x, y, z, w);
    ++c.count;
    if (!std::isfinite(value)) {
      c.passed = false;
      c.locations.push_back(t);
    }
  }
  c.detail = c.passed ? "finite at all sampled points"
                      : std::to_string(c.locations.size()) + " non-finite samples";
  return c;
}

ValidationCheck check_map(const std::string& name, const ImpulseMap& m, const ImpulseSchedule& schedule,
                          double horizon, const ValidationOptions& opt, std::uint64_t stream) {
  ValidationCheck c{name, true, false, "", {}, 0};
  std::vector<double> pts;
  try {
    pts = schedule.points_below(horizon);
  } catch (const ValidationError&) {
    c.detail = "schedule not enumerable";
    return c;
  }
  const std::size_t n = std::min(pts.size(), opt.impulse_points_checked);
  const double d = opt.continuity_step;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = i + 1;
    const double p = pts[i];
    SampleStream rng(opt.seed, stream, i);
    const double a = rng.symmetric(1.0) * (1.0 + p);
    const double b = rng.symmetric(1.0);
    const double m0 = m(k, p, a, b);
    const double ma = m(k, p, a + d, b);
    const double mb = m(k, p, a, b + d);
    ++c.count;
    const double tol = 1e-3 * (1.0 + std::abs(m0));
    if (!std::isfinite(m0) || !std::isfinite(ma) || !std::isfinite(mb) ||
        std::abs(ma - m0) > tol || std::abs(mb - m0) > tol) {
      c.passed = false;
      c.locations.push_back(p);
    }
  }
  c.detail = c.passed ? "no discontinuity detected at sampled points"
                      : std::to_string(c.locations.size()) + " suspect impulse points";
  return c;
}

}  // namespace

ValidationReport validate_problem(const ImpulsiveCoupledBVP& p, double horizon,
                                  const ValidationOptions& options) {
  if (!(horizon > 0.0)) throw ValidationError("validate_problem: horizon must be positive");
  ValidationReport report;

  ValidationCheck domain{"working-domain", true, true, "", {}, 0};
  if (!std::isfinite(p.t0) || p.t0 < 0.0 || !(p.t0 < horizon)) {
    domain.passed = false;
    domain.detail = "need 0 <= t0 < horizon";
  } else {
    domain.detail = "t0 within [0, horizon)";
  }
  report.checks.push_back(domain);

  ValidationCheck boundary{"boundary-finite", p.boundary.finite(), true, "", {}, 4};
  boundary.detail = boundary.passed ? "A1, A2, B1, B2 finite" : "non-finite boundary data";
  report.checks.push_back(boundary);

  report.checks.push_back(check_schedule("u-schedule", p.u_schedule, p.t0, horizon));
  report.checks.push_back(check_schedule("v-schedule", p.v_schedule, p.t0, horizon));
  report.checks.push_back(check_rhs("f-finite", p.f, p.t0, horizon, options, 1));
  report.checks.push_back(check_rhs("h-finite", p.h, p.t0, horizon, options, 2));
  report.checks.push_back(check_map("I0-continuity", p.I0, p.u_schedule, horizon, options, 3));
  report.checks.push_back(check_map("I1-continuity", p.I1, p.u_schedule, horizon, options, 4));
  report.checks.push_back(check_map("J0-continuity", p.J0, p.v_schedule, horizon, options, 5));
  report.checks.push_back(check_map("J1-continuity", p.J1, p.v_schedule, horizon, options, 6));
  return report;
}

}  // namespace halfline
