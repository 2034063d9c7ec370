#include "halfline/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "halfline/errors.hpp"
#include "halfline/kernel.hpp"
#include "halfline/random.hpp"

namespace halfline {

namespace {

template <class F>
const F& require(const F& member, const char* name) {
  if (!member) throw std::invalid_argument(std::string("missing bound: ") + name);
  return member;
}

double extrapolate_blocks(double d1, double d2) {
  d1 = std::abs(d1);
  d2 = std::abs(d2);
  if (d1 == 0.0 && d2 == 0.0) return 0.0;
  if (d1 == 0.0 || d2 >= d1) return std::numeric_limits<double>::infinity();
  return d1 / (1.0 - d2 / d1);
}

struct FamilyRefs {
  const ImpulseSchedule* schedule;
  const ImpulseMap* map;
  const BoundSequence* seq;
  const SequenceTailBound* tail;
  const char* seq_name;
};

std::array<FamilyRefs, 4> families(const ImpulsiveCoupledBVP& p, const CaratheodoryBounds& b) {
  return {{{&p.u_schedule, &p.I0, &b.phi_seq, &b.phi_tail, "phi_seq"},
           {&p.u_schedule, &p.I1, &b.psi_seq, &b.psi_tail, "psi_seq"},
           {&p.v_schedule, &p.J0, &b.phij_seq, &b.phij_tail, "phij_seq"},
           {&p.v_schedule, &p.J1, &b.thetaj_seq, &b.thetaj_tail, "thetaj_seq"}}};
}

/// Number of schedule points with index <= K (finite lists may be shorter).
std::size_t available_points(const ImpulseSchedule& s, std::size_t K) {
  if (s.is_rule()) return K;
  std::size_t n = 0;
  while (n < K && s.point(n + 1)) ++n;
  return n;
}

SequenceSummary summarize(const FamilyRefs& f, double rho, std::size_t K) {
  SequenceSummary out;
  const std::size_t n = available_points(*f.schedule, K);
  if (n == 0 && !f.schedule->is_rule()) {
    out.present = static_cast<bool>(*f.seq);
    out.tail = 0.0;
    out.tail_is_bound = true;
    return out;
  }
  const BoundSequence& seq = require(*f.seq, f.seq_name);
  out.present = true;
  std::size_t next_checkpoint = 10;
  for (std::size_t k = 1; k <= n; ++k) {
    out.partial_sum += seq(rho, k);
    if (k == next_checkpoint) {
      out.checkpoints.emplace_back(k, out.partial_sum);
      next_checkpoint *= 10;
    }
  }
  if (out.checkpoints.empty() || out.checkpoints.back().first != n) out.checkpoints.emplace_back(n, out.partial_sum);

  if (*f.tail) {
    out.tail = (*f.tail)(rho, n);
    out.tail_is_bound = true;
  } else if (!f.schedule->is_rule()) {
    out.tail = 0.0;  // finite list fully summed
    out.tail_is_bound = true;
    if (f.schedule->point(n + 1)) {
      double rest = 0.0;
      for (std::size_t k = n + 1; f.schedule->point(k); ++k) rest += seq(rho, k);
      out.tail = rest;
    }
  } else {
    const std::size_t base = std::max<std::size_t>(n, 1);
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t k = n + 1; k <= n + base; ++k) d1 += seq(rho, k);
    for (std::size_t k = n + base + 1; k <= n + 3 * base; ++k) d2 += seq(rho, k);
    out.tail = extrapolate_blocks(d1, d2);
    out.tail_is_bound = false;
  }
  return out;
}

}  // namespace

const char* family_name(ImpulseFamily f) {
  switch (f) {
    case ImpulseFamily::I0: return "I0";
    case ImpulseFamily::I1: return "I1";
    case ImpulseFamily::J0: return "J0";
    case ImpulseFamily::J1: return "J1";
  }
  return "?";
}

DominationResult check_domination(const ImpulsiveCoupledBVP& p, const CaratheodoryBounds& b, double rho,
                                  const DominationOptions& options) {
  if (!(rho > 0.0)) throw std::invalid_argument("check_domination: rho must be positive");
  if (options.samples == 0) throw std::invalid_argument("check_domination: samples must be positive");
  if (!(options.t_max > p.t0)) throw std::invalid_argument("check_domination: t_max must exceed t0");
  const BoundFunction& Phi = require(b.Phi, "Phi");
  const BoundFunction& Psi = require(b.Psi, "Psi");

  DominationResult out;
  for (std::size_t i = 0; i < options.samples; ++i) {
    SampleStream rng(options.seed, 11, i);
    const double t = rng.uniform(p.t0, options.t_max);
    const double box = rho * (1.0 + t);
    double x = 0, y = 0, z = 0, w = 0;
    bool found = false;
    for (int attempt = 0; attempt < 32 && !found; ++attempt) {
      x = rng.symmetric(box);
      y = rng.symmetric(box);
      z = rng.symmetric(rho);
      w = rng.symmetric(rho);
      found = !b.admissible || b.admissible(t, x, y, z, w);
    }
    if (!found) {
      ++out.rejected;
      continue;
    }
    ++out.tested;
    const double fv = std::abs(p.f(t, x, y, z, w));
    const double hv = std::abs(p.h(t, x, y, z, w));
    const double fb = Phi(rho, t);
    const double hb = Psi(rho, t);
    if (!std::isfinite(fv) || !std::isfinite(fb) || !(fv <= fb)) out.violations.push_back({'f', t, x, y, z, w, fv, fb});
    if (!std::isfinite(hv) || !std::isfinite(hb) || !(hv <= hb)) out.violations.push_back({'h', t, x, y, z, w, hv, hb});
  }
  return out;
}

ImpulseBoundResult check_impulse_bounds(const ImpulsiveCoupledBVP& p, const CaratheodoryBounds& b, double rho,
                                        std::size_t K, const ImpulseBoundOptions& options) {
  if (K == 0) throw std::invalid_argument("check_impulse_bounds: K must be >= 1");
  if (!(rho > 0.0)) throw std::invalid_argument("check_impulse_bounds: rho must be positive");
  ImpulseBoundResult out;
  const auto fams = families(p, b);
  for (int fi = 0; fi < 4; ++fi) {
    const FamilyRefs& f = fams[static_cast<std::size_t>(fi)];
    out.sequences[static_cast<std::size_t>(fi)] = summarize(f, rho, K);
    const std::size_t n = available_points(*f.schedule, K);
    if (n == 0) continue;
    const BoundSequence& seq = *f.seq;
    for (std::size_t k = 1; k <= n; ++k) {
      const double pk = *f.schedule->point(k);
      const double bound = seq(rho, k);
      const double amax = rho * (1.0 + pk) * (1.0 - 1e-12);
      const double bmax = rho * (1.0 - 1e-12);
      auto test = [&](double a, double bb) {
        const double value = std::abs((*f.map)(k, pk, a, bb));
        if (!std::isfinite(value) || !std::isfinite(bound) || !(value <= bound * (1.0 + 1e-12))) {
          out.violations.push_back({static_cast<ImpulseFamily>(fi), k, pk, a, bb, value, bound});
        }
      };
      test(amax, bmax);
      test(amax, -bmax);
      test(-amax, bmax);
      test(-amax, -bmax);
      SampleStream rng(options.seed, 21 + static_cast<std::uint64_t>(fi), k);
      for (std::size_t s = 0; s < options.samples_per_point; ++s) {
        test(rng.symmetric(rho * (1.0 + pk)), rng.symmetric(rho));
      }
      ++out.points_checked;
    }
  }
  return out;
}

Rho2Result compute_rho2(const ImpulsiveCoupledBVP& p, const CaratheodoryBounds& b, double rho1, double rho,
                        std::size_t K, const QuadratureConfig& q) {
  q.validate();
  if (!(rho1 >= 0.0)) throw std::invalid_argument("compute_rho2: rho1 must be >= 0");
  if (!(rho >= 0.0)) throw std::invalid_argument("compute_rho2: rho must be >= 0");
  const BoundFunction& Phi = require(b.Phi, "Phi");
  const BoundFunction& Psi = require(b.Psi, "Psi");

  Rho2Result r;
  const auto fams = families(p, b);
  for (std::size_t fi = 0; fi < 4; ++fi) {
    const SequenceSummary s = summarize(fams[fi], rho, std::max<std::size_t>(K, 1));
    const double tail = s.tail.value_or(0.0);
    r.sums[fi] = s.partial_sum + tail;
    if (!s.tail_is_bound && tail > q.abs_tol) {
      r.lower_estimate = true;
      r.notes.push_back(std::string(fams[fi].seq_name) + " tail is an extrapolated estimate");
    }
    if (!std::isfinite(tail)) r.notes.push_back(std::string(fams[fi].seq_name) + " partial sums do not settle");
  }

  const ProblemMeshes meshes = build_meshes(p, q);
  const Mesh& m = *meshes.u;
  const GaussRule& rule = GaussRule::legendre(q.gauss_points);
  auto integrate = [&](const BoundFunction& g, bool weighted) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < m.size(); ++i) {
      const double a = m.time(i), bnd = m.time(i + 1);
      const double mid = 0.5 * (a + bnd), half = 0.5 * (bnd - a);
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double s = mid + half * rule.nodes[j];
        const double val = g(rho, s) * (weighted ? kernel::kernel_weight_sup(s) : 1.0);
        if (!std::isfinite(val)) throw EvaluationError("non-finite bound function", s, {rho, 0, 0, 0});
        total += half * rule.weights[j] * val;
      }
    }
    return total;
  };
  auto tail_of = [&](const BoundFunction& g, const IntegralTailBound& tb, const char* name) {
    if (tb) return tb(rho, q.horizon);
    const double H = q.horizon;
    auto block = [&](double lo, double hi) {
      double total = 0.0;
      const std::size_t panels = 64;
      const double width = (hi - lo) / panels;
      for (std::size_t k = 0; k < panels; ++k) {
        const double mid = lo + (static_cast<double>(k) + 0.5) * width;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
          total += 0.5 * width * rule.weights[j] * g(rho, mid + 0.5 * width * rule.nodes[j]);
        }
      }
      return total;
    };
    const double est = extrapolate_blocks(block(H, 2 * H), block(2 * H, 4 * H));
    if (est > q.abs_tol) {
      r.lower_estimate = true;
      r.notes.push_back(std::string(name) + " integral tail is an extrapolated estimate");
    }
    return est;
  };

  const double tail_Phi = tail_of(Phi, b.Phi_tail, "Phi");
  const double tail_Psi = tail_of(Psi, b.Psi_tail, "Psi");
  r.int_Phi = integrate(Phi, false) + tail_Phi;
  r.int_Psi = integrate(Psi, false) + tail_Psi;
  // Q < 1, so the unweighted tail bounds the weighted one.
  r.int_Q_Phi = integrate(Phi, true) + tail_Phi;
  r.int_Q_Psi = integrate(Psi, true) + tail_Psi;

  r.K1 = kernel::boundary_weight_sup(p.boundary.A1, p.boundary.B1);
  r.K2 = kernel::boundary_weight_sup(p.boundary.A2, p.boundary.B2);
  r.terms[0] = rho1;
  r.terms[1] = r.K1 + r.sums[0] + 2.0 * r.sums[1] + r.int_Q_Phi;
  r.terms[2] = r.K2 + r.sums[2] + 2.0 * r.sums[3] + r.int_Q_Psi;
  r.terms[3] = std::abs(p.boundary.B1) + 2.0 * r.sums[1] + r.int_Phi;
  r.terms[4] = std::abs(p.boundary.B2) + 2.0 * r.sums[3] + r.int_Psi;
  r.rho2 = *std::max_element(r.terms.begin(), r.terms.end());
  return r;
}

namespace {

/// Random walk component: derivative piecewise linear between knots, value integrated exactly.
/// `monotone` draws nonnegative derivatives and value jumps starting from a zero value.
PiecewiseC1Function walk_component(const std::shared_ptr<const Mesh>& mesh, std::uint64_t seed,
                                   std::uint64_t stream, double knot_spacing, bool monotone) {
  const Mesh& m = *mesh;
  std::vector<double> values(m.slot_count()), derivs(m.slot_count());
  std::vector<std::size_t> cuts{0};
  for (std::size_t i : m.doubled_indices()) {
    if (i != 0) cuts.push_back(i);
  }
  if (cuts.back() != m.size() - 1) cuts.push_back(m.size() - 1);

  SampleStream jr(seed, stream, 0);
  const double lo = monotone ? 0.0 : -1.0;
  double carry_value = monotone ? 0.0 : jr.uniform(-1.0, 1.0) * (1.0 + m.t0());
  if (m.doubled(0)) {
    // left slot at t0: the pre-jump state
    values[m.left_slot(0)] = carry_value;
    derivs[m.left_slot(0)] = jr.uniform(lo, 1.0);
    carry_value += jr.uniform(lo, 1.0) * (1.0 + m.t0());
  }
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const std::size_t ia = cuts[c], ib = cuts[c + 1];
    const double a = m.time(ia), b = m.time(ib);
    const auto nk = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b - a) / knot_spacing)));
    std::vector<double> kt(nk + 1), kd(nk + 1), kv(nk + 1);
    SampleStream rng(seed, stream, c + 1);
    for (std::size_t j = 0; j <= nk; ++j) {
      kt[j] = a + (b - a) * static_cast<double>(j) / static_cast<double>(nk);
      kd[j] = rng.uniform(lo, 1.0);
    }
    kv[0] = carry_value;
    for (std::size_t j = 0; j < nk; ++j) kv[j + 1] = kv[j] + 0.5 * (kt[j + 1] - kt[j]) * (kd[j] + kd[j + 1]);
    for (std::size_t i = ia; i <= ib; ++i) {
      const double t = m.time(i);
      const std::size_t j = std::min<std::size_t>(
          nk - 1, static_cast<std::size_t>(std::floor((t - a) / (b - a) * static_cast<double>(nk))));
      const double h = kt[j + 1] - kt[j];
      const double x = t - kt[j];
      const double slope = (kd[j + 1] - kd[j]) / h;
      const double val = kv[j] + kd[j] * x + 0.5 * slope * x * x;
      const double der = kd[j] + slope * x;
      // piece start owns the right slot of a doubled node, piece end its left slot
      const std::size_t slot = (i == ia) ? m.right_slot(i) : m.left_slot(i);
      values[slot] = val;
      derivs[slot] = der;
      if (i != ia && i != ib && m.doubled(i)) {
        values[m.right_slot(i)] = val;
        derivs[m.right_slot(i)] = der;
      }
    }
    carry_value = kv[nk] + rng.uniform(lo, 1.0) * (1.0 + b);
  }
  std::vector<Jump> jumps;
  for (std::size_t i : m.doubled_indices()) {
    jumps.push_back({m.time(i), values[m.right_slot(i)] - values[m.left_slot(i)],
                     derivs[m.right_slot(i)] - derivs[m.left_slot(i)]});
  }
  const double tail = derivs.back();
  return PiecewiseC1Function(mesh, std::move(values), std::move(derivs), tail, std::move(jumps));
}

}  // namespace

std::optional<SolutionPair> random_ball_element(const ProblemMeshes& meshes, double radius, std::uint64_t seed,
                                                std::uint64_t index, double knot_spacing,
                                                std::optional<double> u_lower) {
  if (!(radius >= 0.0)) throw std::invalid_argument("random_ball_element: radius must be >= 0");
  if (!(knot_spacing > 0.0)) throw std::invalid_argument("random_ball_element: knot_spacing must be positive");
  const std::uint64_t stream = 4096 + 2 * index;
  if (!u_lower) {
    SolutionPair s{walk_component(meshes.u, seed, stream, knot_spacing, false),
                   walk_component(meshes.v, seed, stream + 1, knot_spacing, false)};
    const double n = norm_X(s);
    if (n == 0.0) return s;
    return (radius / n) * s;
  }
  const PiecewiseC1Function du = walk_component(meshes.u, seed, stream, knot_spacing, true);
  const PiecewiseC1Function v = walk_component(meshes.v, seed, stream + 1, knot_spacing, false);
  const PiecewiseC1Function floor = PiecewiseC1Function::affine(meshes.u, *u_lower, 0.0);
  auto at = [&](double lambda) { return SolutionPair{floor + lambda * du, lambda * v}; };
  if (norm_X(at(0.0)) > radius) return std::nullopt;
  double lo = 0.0, hi = 1.0;
  while (norm_X(at(hi)) < radius && hi < 1e12) hi *= 2.0;
  for (int it = 0; it < 100 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (norm_X(at(mid)) <= radius ? lo : hi) = mid;
  }
  return at(lo);
}

BallInvarianceResult check_ball_invariance(const ImpulsiveCoupledBVP& p, const CaratheodoryBounds& b, double rho2,
                                           const QuadratureConfig& qc,
                                           const BallOptions& options) {
  if (!(rho2 >= 0.0)) throw std::invalid_argument("check_ball_invariance: rho2 must be >= 0");
  const ProblemMeshes meshes = build_meshes(p, qc);
  BallInvarianceResult out;
  auto admissible = [&](const SolutionPair& s) {
    if (!b.admissible) return true;
    const Mesh& m = s.u.mesh();
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (Side side : {Side::Left, Side::Right}) {
        const PointValue u = side == Side::Left ? s.u.left(i) : s.u.right(i);
        const PointValue v = side == Side::Left ? s.v.left(i) : s.v.right(i);
        if (!b.admissible(m.time(i), u.value, v.value, u.deriv, v.deriv)) return false;
      }
    }
    return true;
  };
  const std::size_t max_draws = 10 * options.samples;
  for (std::size_t i = 0; i < max_draws && out.tested < options.samples; ++i) {
    SampleStream rng(options.seed, 31, i);
    const double radius = rho2 * (1.0 - rng.uniform());
    std::optional<SolutionPair> s;
    for (std::uint64_t attempt = 0; attempt < 16 && !s; ++attempt) {
      auto candidate =
          random_ball_element(meshes, radius, options.seed, i * 16 + attempt, options.knot_spacing, options.u_lower);
      if (candidate && admissible(*candidate)) s = std::move(candidate);
    }
    if (!s) {
      ++out.rejected;
      continue;
    }
    ++out.tested;
    double image = std::numeric_limits<double>::infinity();
    try {
      image = norm_X(apply_T(p, *s, qc).value);
    } catch (const EvaluationError&) {
    }
    out.max_image_norm = std::max(out.max_image_norm, image);
    if (image <= rho2 * (1.0 + options.slack)) {
      ++out.inside;
    } else {
      out.failing_image_norms.push_back(image);
    }
  }
  return out;
}

}  // namespace halfline
