#include "halfline/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "halfline/errors.hpp"

namespace halfline {

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("solver: tol must be positive");
  if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("solver: damping must lie in (0, 1]");
  if (max_iter == 0) throw std::invalid_argument("solver: max_iter must be >= 1");
  if (initial_guess == InitialGuess::UserSupplied && !user_guess) {
    throw std::invalid_argument("solver: user-supplied initial guess missing");
  }
}

double ResidualReport::max_ode() const { return std::max(ode_residual_sup[0], ode_residual_sup[1]); }

double ResidualReport::max_jump() const {
  return *std::max_element(jump_residual_sup.begin(), jump_residual_sup.end());
}

namespace {

// Registry entries at every doubled node, so iterates pack to a fixed layout.
PiecewiseC1Function with_full_registry(PiecewiseC1Function x) {
  std::vector<Jump> zeros;
  for (std::size_t i : x.mesh().doubled_indices()) zeros.push_back({x.mesh().time(i), 0.0, 0.0});
  PiecewiseC1Function z(x.mesh_ptr(), std::vector<double>(x.mesh().slot_count(), 0.0),
                        std::vector<double>(x.mesh().slot_count(), 0.0), 0.0, std::move(zeros));
  x += z;
  return x;
}

std::size_t packed_size(const PiecewiseC1Function& x) {
  return 2 * x.mesh().slot_count() + 1 + 2 * x.jumps().size();
}

void pack_into(const PiecewiseC1Function& x, Eigen::VectorXd& out, std::size_t& pos) {
  for (double v : x.values()) out[pos++] = v;
  for (double d : x.derivs()) out[pos++] = d;
  out[pos++] = x.tail_slope();
  for (const Jump& j : x.jumps()) {
    out[pos++] = j.dvalue;
    out[pos++] = j.dderiv;
  }
}

PiecewiseC1Function unpack_from(const PiecewiseC1Function& layout, const Eigen::VectorXd& in, std::size_t& pos) {
  const std::size_t n = layout.mesh().slot_count();
  std::vector<double> values(n), derivs(n);
  for (std::size_t j = 0; j < n; ++j) values[j] = in[pos++];
  for (std::size_t j = 0; j < n; ++j) derivs[j] = in[pos++];
  const double tail = in[pos++];
  std::vector<Jump> jumps = layout.jumps();
  for (Jump& j : jumps) {
    j.dvalue = in[pos++];
    j.dderiv = in[pos++];
  }
  return PiecewiseC1Function(layout.mesh_ptr(), std::move(values), std::move(derivs), tail, std::move(jumps));
}

Eigen::VectorXd pack(const SolutionPair& s) {
  Eigen::VectorXd out(packed_size(s.u) + packed_size(s.v));
  std::size_t pos = 0;
  pack_into(s.u, out, pos);
  pack_into(s.v, out, pos);
  return out;
}

SolutionPair unpack(const SolutionPair& layout, const Eigen::VectorXd& in) {
  std::size_t pos = 0;
  PiecewiseC1Function u = unpack_from(layout.u, in, pos);
  PiecewiseC1Function v = unpack_from(layout.v, in, pos);
  return {std::move(u), std::move(v)};
}

// Least-squares weights matching the X-norm: values scaled by 1/(1+t).
void weights_into(const PiecewiseC1Function& x, Eigen::VectorXd& out, std::size_t& pos) {
  const Mesh& m = x.mesh();
  for (std::size_t j = 0; j < m.slot_count(); ++j) out[pos++] = 1.0 / (1.0 + m.slot_time(j));
  for (std::size_t j = 0; j < m.slot_count(); ++j) out[pos++] = 1.0;
  out[pos++] = 1.0;
  for (const Jump& jp : x.jumps()) {
    out[pos++] = 1.0 / (1.0 + jp.t);
    out[pos++] = 1.0;
  }
}

Eigen::VectorXd norm_weights(const SolutionPair& s) {
  Eigen::VectorXd out(packed_size(s.u) + packed_size(s.v));
  std::size_t pos = 0;
  weights_into(s.u, out, pos);
  weights_into(s.v, out, pos);
  return out;
}

SolutionPair normalized(const SolutionPair& s) { return {with_full_registry(s.u), with_full_registry(s.v)}; }

}  // namespace

SolveResult solve(const ImpulsiveCoupledBVP& p, const SolverConfig& sc, const QuadratureConfig& qc) {
  sc.validate();
  qc.validate();
  const ProblemMeshes meshes = build_meshes(p, qc);

  SolutionPair s = [&] {
    switch (sc.initial_guess) {
      case InitialGuess::Zero:
        return zero_pair(meshes);
      case InitialGuess::UserSupplied:
        return *sc.user_guess;
      case InitialGuess::AffineBoundary:
      default:
        return affine_pair(p, meshes);
    }
  }();
  s = normalized(s);

  SolveDiagnostics diag;
  std::optional<SolutionPair> best;
  double best_residual = std::numeric_limits<double>::infinity();

  std::deque<Eigen::VectorXd> dx_hist, dg_hist;
  Eigen::VectorXd prev_x, prev_g;
  bool have_prev = false;
  const Eigen::VectorXd weights = norm_weights(s);

  for (std::size_t n = 0; n < sc.max_iter; ++n) {
    OperatorResult ts = [&] {
      try {
        return apply_T(p, s, qc);
      } catch (const EvaluationError& e) {
        throw e.with_iteration(static_cast<int>(n));
      }
    }();
    SolutionPair ts_pair = normalized(ts.value);
    const double r = norm_X(ts_pair - s);
    diag.residual_history.push_back(r);
    diag.iterations = n + 1;
    diag.truncation = ts.truncation;
    if (r < best_residual || !best) {
      best_residual = r;
      best = s;
      diag.returned_iteration = n;
    }
    if (r <= sc.tol) {
      diag.converged = true;
      break;
    }
    if (!std::isfinite(r) || (diag.residual_history.front() > 0.0 &&
                              r > sc.divergence_factor * diag.residual_history.front())) {
      diag.diverged = true;
      break;
    }
    if (n + 1 == sc.max_iter) break;

    if (sc.anderson_depth == 0) {
      if (sc.damping == 1.0) {
        s = std::move(ts_pair);
      } else {
        s = (1.0 - sc.damping) * s + sc.damping * ts_pair;
      }
      continue;
    }

    const Eigen::VectorXd x = pack(s);
    const Eigen::VectorXd g = pack(ts_pair) - x;
    if (have_prev) {
      dx_hist.push_back(x - prev_x);
      dg_hist.push_back(g - prev_g);
      if (dx_hist.size() > sc.anderson_depth) {
        dx_hist.pop_front();
        dg_hist.pop_front();
      }
    }
    prev_x = x;
    prev_g = g;
    have_prev = true;

    Eigen::VectorXd next = x + sc.damping * g;
    if (!dx_hist.empty()) {
      const auto m = static_cast<Eigen::Index>(dx_hist.size());
      Eigen::MatrixXd DX(x.size(), m), DG(x.size(), m);
      for (Eigen::Index j = 0; j < m; ++j) {
        DX.col(j) = dx_hist[static_cast<std::size_t>(j)];
        DG.col(j) = dg_hist[static_cast<std::size_t>(j)];
      }
      const Eigen::MatrixXd WDG = weights.asDiagonal() * DG;
      const Eigen::VectorXd gamma = WDG.colPivHouseholderQr().solve(weights.cwiseProduct(g));
      if (gamma.allFinite()) next -= (DX + sc.damping * DG) * gamma;
    }
    s = unpack(s, next);
  }

  // Contraction estimate from the tail of the residual history.
  const auto& h = diag.residual_history;
  double log_sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = h.size(); i-- > 1 && count < 3;) {
    if (h[i - 1] > 0.0 && h[i] > 0.0) {
      log_sum += std::log(h[i] / h[i - 1]);
      ++count;
    }
  }
  diag.contraction_estimate = count ? std::exp(log_sum / static_cast<double>(count)) : 0.0;

  if (diag.converged) {
    diag.returned_iteration = diag.iterations - 1;
    return {std::move(s), std::move(diag)};
  }
  return {std::move(*best), std::move(diag)};
}

std::vector<double> first_derivative_weights(double x0, const std::vector<double>& nodes) {
  const std::size_t n = nodes.size();
  if (n < 2) throw std::invalid_argument("first_derivative_weights: need at least two nodes");
  constexpr std::size_t order = 1;
  std::vector<std::array<double, order + 1>> c(n, {0.0, 0.0});
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) {
          c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = c[i][1];
  return w;
}

namespace {

struct PieceSample {
  double t;
  PointValue u;
  PointValue v;
};

void ode_residuals(const ImpulsiveCoupledBVP& p, const SolutionPair& s, ResidualReport& rep) {
  const Mesh& mu = s.u.mesh();
  const Mesh& mv = s.v.mesh();
  const std::size_t n = mu.size();
  std::vector<std::size_t> cuts{0};
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (mu.doubled(i) || mv.doubled(i)) cuts.push_back(i);
  }
  cuts.push_back(n - 1);

  constexpr std::size_t stencil = 7;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const std::size_t ia = cuts[c];
    const std::size_t ib = cuts[c + 1];
    std::vector<PieceSample> piece;
    for (std::size_t i = ia; i <= ib; ++i) {
      const bool start = i == ia;
      piece.push_back({mu.time(i), start ? s.u.right(i) : s.u.left(i), start ? s.v.right(i) : s.v.left(i)});
    }
    const std::size_t m = piece.size();
    const std::size_t width = std::min(stencil, m);
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t first = std::min(j >= width / 2 ? j - width / 2 : 0, m - width);
      std::vector<double> nodes(width);
      for (std::size_t q = 0; q < width; ++q) nodes[q] = piece[first + q].t;
      const std::vector<double> w = first_derivative_weights(piece[j].t, nodes);
      // differences from the centre derivative: the weights sum to zero, so constants cancel exactly
      double upp = 0.0, vpp = 0.0;
      for (std::size_t q = 0; q < width; ++q) {
        upp += w[q] * (piece[first + q].u.deriv - piece[j].u.deriv);
        vpp += w[q] * (piece[first + q].v.deriv - piece[j].v.deriv);
      }
      const PieceSample& at = piece[j];
      const double fv = p.f(at.t, at.u.value, at.v.value, at.u.deriv, at.v.deriv);
      const double hv = p.h(at.t, at.u.value, at.v.value, at.u.deriv, at.v.deriv);
      const double ru = std::isfinite(fv) ? std::abs(upp - fv) : std::numeric_limits<double>::infinity();
      const double rv = std::isfinite(hv) ? std::abs(vpp - hv) : std::numeric_limits<double>::infinity();
      if (ru > rep.ode_residual_sup[0]) rep.ode_residual_sup[0] = ru, rep.ode_residual_at[0] = at.t;
      if (rv > rep.ode_residual_sup[1]) rep.ode_residual_sup[1] = rv, rep.ode_residual_at[1] = at.t;
    }
  }
}

void jump_residuals(const ImpulseSchedule& schedule, const ImpulseMap& m0, const ImpulseMap& m1,
                    const PiecewiseC1Function& x, double& r0, double& r1) {
  const Mesh& m = x.mesh();
  const std::vector<double> pts = schedule.points_below(m.horizon());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto idx = m.index_of(pts[k]);
    if (!idx || !m.doubled(*idx)) {
      r0 = r1 = std::numeric_limits<double>::infinity();
      return;
    }
    const PointValue l = x.left(*idx);
    const PointValue r = x.right(*idx);
    const double e0 = std::abs((r.value - l.value) - m0(k + 1, pts[k], l.value, l.deriv));
    const double e1 = std::abs((r.deriv - l.deriv) - m1(k + 1, pts[k], l.value, l.deriv));
    r0 = std::max(r0, std::isfinite(e0) ? e0 : std::numeric_limits<double>::infinity());
    r1 = std::max(r1, std::isfinite(e1) ? e1 : std::numeric_limits<double>::infinity());
  }
}

}  // namespace

ResidualReport verify_residuals(const ImpulsiveCoupledBVP& p, const SolutionPair& s) {
  if (s.u.mesh().times() != s.v.mesh().times()) {
    throw std::invalid_argument("verify_residuals: u and v meshes must share base times");
  }
  ResidualReport rep;
  ode_residuals(p, s, rep);
  jump_residuals(p.u_schedule, p.I0, p.I1, s.u, rep.jump_residual_sup[0], rep.jump_residual_sup[1]);
  jump_residuals(p.v_schedule, p.J0, p.J1, s.v, rep.jump_residual_sup[2], rep.jump_residual_sup[3]);
  const std::size_t last = s.u.mesh().size() - 1;
  rep.boundary_residuals[0] = std::abs(s.u.value_at_origin() - p.boundary.A1);
  rep.boundary_residuals[1] = std::abs(s.v.value_at_origin() - p.boundary.A2);
  rep.boundary_residuals[2] = std::abs(s.u.left(last).deriv - p.boundary.B1);
  rep.boundary_residuals[3] = std::abs(s.v.left(last).deriv - p.boundary.B2);
  return rep;
}

}  // namespace halfline
