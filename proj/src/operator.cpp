#include "halfline/operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/legendre.hpp>

#include "halfline/errors.hpp"

namespace halfline {

void QuadratureConfig::validate() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("quadrature: horizon must be positive");
  if (!(abs_tol > 0.0)) throw std::invalid_argument("quadrature: abs_tol must be positive");
  if (!(max_step > 0.0)) throw std::invalid_argument("quadrature: max_step must be positive");
  if (panels_per_piece == 0) throw std::invalid_argument("quadrature: panels_per_piece must be >= 1");
  if (gauss_points == 0 || gauss_points > 64) throw std::invalid_argument("quadrature: gauss_points must be in [1, 64]");
}

const GaussRule& GaussRule::legendre(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussRule rule;
  const int order = static_cast<int>(n);
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(order);  // nonnegative zeros
  auto weight = [order](double x) {
    const double dp = boost::math::legendre_p_prime(order, x);
    return 2.0 / ((1.0 - x * x) * dp * dp);
  };
  for (auto z = zeros.rbegin(); z != zeros.rend(); ++z) {
    if (*z == 0.0) continue;
    rule.nodes.push_back(-*z);
    rule.weights.push_back(weight(*z));
  }
  for (double z : zeros) {
    rule.nodes.push_back(z);
    rule.weights.push_back(weight(z));
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

TruncationReport TruncationReport::merge(const TruncationReport& a, const TruncationReport& b) {
  TruncationReport r;
  r.integral_tail_estimate = std::max(a.integral_tail_estimate, b.integral_tail_estimate);
  r.impulse_tail_estimate = std::max(a.impulse_tail_estimate, b.impulse_tail_estimate);
  r.K_used = std::max(a.K_used, b.K_used);
  r.integral_tail_is_bound = a.integral_tail_is_bound && b.integral_tail_is_bound;
  r.impulse_tail_is_bound = a.impulse_tail_is_bound && b.impulse_tail_is_bound;
  r.warning = a.warning || b.warning;
  return r;
}

ProblemMeshes build_meshes(const ImpulsiveCoupledBVP& p, const QuadratureConfig& q) {
  q.validate();
  if (!(p.t0 < q.horizon)) throw ValidationError("build_meshes: t0 must lie below the horizon");
  const std::vector<double> tu = p.u_schedule.points_below(q.horizon);
  const std::vector<double> tv = p.v_schedule.points_below(q.horizon);
  for (const auto* pts : {&tu, &tv}) {
    for (std::size_t i = 0; i < pts->size(); ++i) {
      if ((*pts)[i] < p.t0 || (i > 0 && !((*pts)[i] > (*pts)[i - 1]))) {
        throw ValidationError("build_meshes: impulse points must be strictly increasing and >= t0");
      }
    }
  }
  std::vector<double> all = tu;
  all.insert(all.end(), tv.begin(), tv.end());
  auto u = std::make_shared<const Mesh>(
      Mesh::piecewise_uniform(p.t0, q.horizon, all, tu, q.panels_per_piece, q.max_step));
  auto v = std::make_shared<const Mesh>(
      Mesh::piecewise_uniform(p.t0, q.horizon, all, tv, q.panels_per_piece, q.max_step));
  return {u, v};
}

SolutionPair affine_pair(const ImpulsiveCoupledBVP& p, const ProblemMeshes& meshes) {
  return {PiecewiseC1Function::affine(meshes.u, p.boundary.A1, p.boundary.B1),
          PiecewiseC1Function::affine(meshes.v, p.boundary.A2, p.boundary.B2)};
}

SolutionPair zero_pair(const ProblemMeshes& meshes) {
  return {PiecewiseC1Function::zero(meshes.u), PiecewiseC1Function::zero(meshes.v)};
}

namespace {

enum class Component { U, V };

struct ComponentSpec {
  const RhsFunction* rhs;
  const ImpulseSchedule* schedule;
  const ImpulseMap* m0;
  const ImpulseMap* m1;
  double A;
  double B;
  const char* rhs_name;
  const char* m0_name;
  const char* m1_name;
  const BoundFunction* bound;
  const IntegralTailBound* bound_tail;
  const BoundSequence* seq;
  const SequenceTailBound* seq_tail;
};

const BoundFunction kNoBound;
const IntegralTailBound kNoTail;
const BoundSequence kNoSeq;
const SequenceTailBound kNoSeqTail;

ComponentSpec spec_for(const ImpulsiveCoupledBVP& p, Component c) {
  const CaratheodoryBounds* b = p.bounds.get();
  if (c == Component::U) {
    return {&p.f, &p.u_schedule, &p.I0, &p.I1, p.boundary.A1, p.boundary.B1, "f", "I0", "I1",
            b ? &b->Phi : &kNoBound, b ? &b->Phi_tail : &kNoTail, b ? &b->psi_seq : &kNoSeq,
            b ? &b->psi_tail : &kNoSeqTail};
  }
  return {&p.h, &p.v_schedule, &p.J0, &p.J1, p.boundary.A2, p.boundary.B2, "h", "J0", "J1",
          b ? &b->Psi : &kNoBound, b ? &b->Psi_tail : &kNoTail, b ? &b->thetaj_seq : &kNoSeq,
          b ? &b->thetaj_tail : &kNoSeqTail};
}

void check_compatible(const ImpulsiveCoupledBVP& p, const SolutionPair& s, const QuadratureConfig& q) {
  const Mesh& mu = s.u.mesh();
  const Mesh& mv = s.v.mesh();
  if (mu.times() != mv.times()) throw std::invalid_argument("apply_T: u and v meshes must share base times");
  if (std::abs(mu.horizon() - q.horizon) > 1e-12 * (1.0 + q.horizon)) {
    throw std::invalid_argument("apply_T: mesh horizon differs from quadrature horizon");
  }
  auto check = [&](const Mesh& m, const ImpulseSchedule& sched, const char* name) {
    for (double t : sched.points_below(q.horizon)) {
      const auto idx = m.index_of(t);
      if (!idx || !m.doubled(*idx)) {
        throw std::invalid_argument(std::string("apply_T: impulse point of ") + name +
                                    " is not a doubled node of its mesh");
      }
    }
  };
  check(mu, p.u_schedule, "u");
  check(mv, p.v_schedule, "v");
  if (std::abs(mu.t0() - p.t0) > 1e-12 * (1.0 + p.t0)) {
    throw std::invalid_argument("apply_T: mesh t0 differs from the problem's working-domain cutoff");
  }
}

struct PanelIntegrals {
  std::vector<double> g;   // ∫_panel g
  std::vector<double> sg;  // ∫_panel s g
};

double checked(double value, const char* what, double s, double x, double y, double z, double w) {
  if (!std::isfinite(value)) {
    throw EvaluationError(std::string("non-finite ") + what, s, {x, y, z, w});
  }
  return value;
}

/// Panel integrals of f and/or h along the current iterate.
void panel_integrals(const ImpulsiveCoupledBVP& p, const SolutionPair& s, const QuadratureConfig& q,
                     PanelIntegrals* out_f, PanelIntegrals* out_h) {
  const Mesh& m = s.u.mesh();
  const GaussRule& rule = GaussRule::legendre(q.gauss_points);
  const std::size_t n = m.size() - 1;
  if (out_f) out_f->g.assign(n, 0.0), out_f->sg.assign(n, 0.0);
  if (out_h) out_h->g.assign(n, 0.0), out_h->sg.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = m.time(i);
    const double b = m.time(i + 1);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double f0 = 0.0, f1 = 0.0, h0 = 0.0, h1 = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double t = mid + half * rule.nodes[j];
      const double w = half * rule.weights[j];
      const PointValue u = s.u.eval_in_interval(i, t);
      const PointValue v = s.v.eval_in_interval(i, t);
      if (out_f) {
        const double g = checked(p.f(t, u.value, v.value, u.deriv, v.deriv), "right-hand side f", t, u.value,
                                 v.value, u.deriv, v.deriv);
        f0 += w * g;
        f1 += w * t * g;
      }
      if (out_h) {
        const double g = checked(p.h(t, u.value, v.value, u.deriv, v.deriv), "right-hand side h", t, u.value,
                                 v.value, u.deriv, v.deriv);
        h0 += w * g;
        h1 += w * t * g;
      }
    }
    if (out_f) out_f->g[i] = f0, out_f->sg[i] = f1;
    if (out_h) out_h->g[i] = h0, out_h->sg[i] = h1;
  }
}

/// Geometric continuation of dyadic block sums d1 = Σ_[H,2H), d2 = Σ_[2H,4H).
double extrapolate_tail(double d1, double d2) {
  d1 = std::abs(d1);
  d2 = std::abs(d2);
  if (d1 == 0.0 && d2 == 0.0) return 0.0;
  if (d1 == 0.0) return std::numeric_limits<double>::infinity();
  const double r = d2 / d1;
  if (r >= 1.0) return std::numeric_limits<double>::infinity();
  return d1 / (1.0 - r);
}

PointValue extended(const PiecewiseC1Function& x, double t) {
  const PointValue last = x.left(x.mesh().size() - 1);
  return {last.value + x.tail_slope() * (t - x.mesh().horizon()), x.tail_slope()};
}

double abs_integral_on_extension(const RhsFunction& g, const SolutionPair& s, double a, double b,
                                 std::size_t panels, const GaussRule& rule) {
  double total = 0.0;
  const double width = (b - a) / static_cast<double>(panels);
  for (std::size_t k = 0; k < panels; ++k) {
    const double lo = a + width * static_cast<double>(k);
    const double mid = lo + 0.5 * width;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double t = mid + 0.5 * width * rule.nodes[j];
      const PointValue u = extended(s.u, t);
      const PointValue v = extended(s.v, t);
      const double val = g(t, u.value, v.value, u.deriv, v.deriv);
      if (!std::isfinite(val)) return std::numeric_limits<double>::infinity();
      total += 0.5 * width * rule.weights[j] * std::abs(val);
    }
  }
  return total;
}

double bounded_rho(const SolutionPair& s) {
  const double r = norm_X(s);
  return r * (1.0 + 1e-9) + 1e-12;
}

TruncationReport truncation_for(const ComponentSpec& c, const SolutionPair& s,
                                const PiecewiseC1Function& own, const QuadratureConfig& q, std::size_t K) {
  TruncationReport rep;
  rep.K_used = K;
  const double H = q.horizon;
  const double rho = bounded_rho(s);

  if (q.tail_bound_fn) {
    rep.integral_tail_estimate = q.tail_bound_fn(H);
    rep.integral_tail_is_bound = true;
  } else if (*c.bound_tail) {
    rep.integral_tail_estimate = (*c.bound_tail)(rho, H);
    rep.integral_tail_is_bound = true;
  } else {
    const GaussRule& rule = GaussRule::legendre(q.gauss_points);
    const double d1 = abs_integral_on_extension(*c.rhs, s, H, 2 * H, 64, rule);
    const double d2 = abs_integral_on_extension(*c.rhs, s, 2 * H, 4 * H, 64, rule);
    rep.integral_tail_estimate = extrapolate_tail(d1, d2);
    rep.integral_tail_is_bound = false;
  }

  if (*c.seq_tail) {
    rep.impulse_tail_estimate = (*c.seq_tail)(rho, K);
    rep.impulse_tail_is_bound = true;
  } else if (!c.schedule->is_rule() && c.schedule->points_between(H, std::numeric_limits<double>::infinity()).empty()) {
    rep.impulse_tail_estimate = 0.0;
    rep.impulse_tail_is_bound = true;
  } else if (*c.seq) {
    const std::size_t base = std::max<std::size_t>(K, 1);
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t k = K + 1; k <= K + base; ++k) d1 += std::abs((*c.seq)(rho, k));
    for (std::size_t k = K + base + 1; k <= K + 3 * base; ++k) d2 += std::abs((*c.seq)(rho, k));
    rep.impulse_tail_estimate = extrapolate_tail(d1, d2);
    rep.impulse_tail_is_bound = false;
  } else {
    const auto block = [&](double lo, double hi) {
      double sum = 0.0;
      for (const auto& [k, t] : c.schedule->points_between(lo, hi, 1'000'000)) {
        const PointValue x = extended(own, t);
        sum += std::abs((*c.m1)(k, t, x.value, x.deriv));
      }
      return sum;
    };
    if (c.schedule->is_rule()) {
      rep.impulse_tail_estimate = extrapolate_tail(block(H, 2 * H), block(2 * H, 4 * H));
    } else {
      rep.impulse_tail_estimate = block(H, std::numeric_limits<double>::infinity());
    }
    rep.impulse_tail_is_bound = false;
  }
  if (!std::isfinite(rep.integral_tail_estimate) || !std::isfinite(rep.impulse_tail_estimate)) {
    rep.warning = true;
  }
  if ((!rep.integral_tail_is_bound && rep.integral_tail_estimate > q.abs_tol) ||
      (!rep.impulse_tail_is_bound && rep.impulse_tail_estimate > q.abs_tol)) {
    rep.warning = true;
  }
  return rep;
}

ComponentResult assemble(const ComponentSpec& c, const SolutionPair& s,
                         const PiecewiseC1Function& own, const PanelIntegrals& panels, const QuadratureConfig& q) {
  const Mesh& m = own.mesh();
  const std::size_t n = m.size();

  // prefix[i] = ∫_{t0}^{t_i} s g ds, suffix[i] = ∫_{t_i}^{H} g ds
  std::vector<double> prefix(n, 0.0), suffix(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) prefix[i] = prefix[i - 1] + panels.sg[i - 1];
  for (std::size_t i = n - 1; i-- > 0;) suffix[i] = suffix[i + 1] + panels.g[i];

  const std::vector<double> pts = c.schedule->points_below(q.horizon);
  const std::size_t K = pts.size();
  std::vector<double> jump0(K), jump1(K);
  for (std::size_t k = 0; k < K; ++k) {
    const auto idx = m.index_of(pts[k]);
    const PointValue x = own.left(*idx);
    jump0[k] = (*c.m0)(k + 1, pts[k], x.value, x.deriv);
    jump1[k] = (*c.m1)(k + 1, pts[k], x.value, x.deriv);
    if (!std::isfinite(jump0[k])) throw EvaluationError(std::string("non-finite impulse map ") + c.m0_name, pts[k], {x.value, 0, x.deriv, 0});
    if (!std::isfinite(jump1[k])) throw EvaluationError(std::string("non-finite impulse map ") + c.m1_name, pts[k], {x.value, 0, x.deriv, 0});
  }
  // before[k] = Σ_{m<k} (I0m - I1m p_m), from_k[k] = Σ_{m>=k} I1m
  std::vector<double> before(K + 1, 0.0), from_k(K + 1, 0.0);
  for (std::size_t k = 0; k < K; ++k) before[k + 1] = before[k] + (jump0[k] - jump1[k] * pts[k]);
  for (std::size_t k = K; k-- > 0;) from_k[k] = from_k[k + 1] + jump1[k];

  std::vector<double> values(m.slot_count()), derivs(m.slot_count());
  std::vector<Jump> jumps;
  jumps.reserve(K);
  std::size_t passed = 0;  // number of impulse points strictly below the current time
  for (std::size_t i = 0; i < n; ++i) {
    const double t = m.time(i);
    while (passed < K && pts[passed] < t) ++passed;
    const double value = c.A + c.B * t - prefix[i] - t * suffix[i] + before[passed] - t * from_k[passed];
    const double deriv = c.B - suffix[i] - from_k[passed];
    const std::size_t l = m.left_slot(i);
    values[l] = value;
    derivs[l] = deriv;
    if (m.doubled(i)) {
      const std::size_t k = passed;  // pts[k] == t
      values[l + 1] = value + jump0[k];
      derivs[l + 1] = deriv + jump1[k];
      jumps.push_back({t, jump0[k], jump1[k]});
    }
  }
  const double tail = derivs.back();
  ComponentResult result{PiecewiseC1Function(own.mesh_ptr(), std::move(values), std::move(derivs), tail, std::move(jumps)),
                         truncation_for(c, s, own, q, K)};
  return result;
}

}  // namespace

ComponentResult apply_T1(const ImpulsiveCoupledBVP& p, const SolutionPair& s, const QuadratureConfig& q) {
  q.validate();
  check_compatible(p, s, q);
  PanelIntegrals pf;
  panel_integrals(p, s, q, &pf, nullptr);
  return assemble(spec_for(p, Component::U), s, s.u, pf, q);
}

ComponentResult apply_T2(const ImpulsiveCoupledBVP& p, const SolutionPair& s, const QuadratureConfig& q) {
  q.validate();
  check_compatible(p, s, q);
  PanelIntegrals ph;
  panel_integrals(p, s, q, nullptr, &ph);
  return assemble(spec_for(p, Component::V), s, s.v, ph, q);
}

OperatorResult apply_T(const ImpulsiveCoupledBVP& p, const SolutionPair& s, const QuadratureConfig& q) {
  q.validate();
  check_compatible(p, s, q);
  PanelIntegrals pf, ph;
  panel_integrals(p, s, q, &pf, &ph);
  ComponentResult r1 = assemble(spec_for(p, Component::U), s, s.u, pf, q);
  ComponentResult r2 = assemble(spec_for(p, Component::V), s, s.v, ph, q);
  return {SolutionPair{std::move(r1.value), std::move(r2.value)},
          TruncationReport::merge(r1.truncation, r2.truncation)};
}

double semiinfinite_integral(const std::function<double(double)>& g, double t, const QuadratureConfig& q,
                             std::span<const double> breakpoints, double lower) {
  q.validate();
  std::vector<double> cuts(breakpoints.begin(), breakpoints.end());
  cuts.push_back(t);
  const Mesh panels = Mesh::piecewise_uniform(lower, q.horizon, cuts, {}, q.panels_per_piece, q.max_step);
  const GaussRule& rule = GaussRule::legendre(q.gauss_points);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < panels.size(); ++i) {
    const double a = panels.time(i);
    const double b = panels.time(i + 1);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double s = mid + half * rule.nodes[j];
      const double val = g(s);
      if (!std::isfinite(val)) throw EvaluationError("non-finite integrand", s, {0, 0, 0, 0});
      acc += rule.weights[j] * val;
    }
    total += half * acc;
  }
  return total;
}

ImpulseSums impulse_sums(const ImpulseSchedule& schedule, const ImpulseMap& m0, const ImpulseMap& m1,
                         const PiecewiseC1Function& x, double t, double horizon) {
  ImpulseSums out{0.0, 0.0};
  const std::vector<double> pts = schedule.points_below(horizon);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const PointValue left = x.eval(pts[k], Side::Left);
    const double c1 = m1(k + 1, pts[k], left.value, left.deriv);
    out.full_sum_deriv += c1;
    if (pts[k] < t) out.partial_sum_at_t += m0(k + 1, pts[k], left.value, left.deriv) + c1 * (t - pts[k]);
  }
  return out;
}

}  // namespace halfline
