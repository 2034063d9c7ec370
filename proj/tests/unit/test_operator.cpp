#include <cmath>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "halfline/errors.hpp"
#include "halfline/kernel.hpp"
#include "halfline/operator.hpp"
#include "halfline/pendulum.hpp"

using namespace halfline;

namespace {

double sup_error(const PiecewiseC1Function& x, double (*exact)(double)) {
  double e = 0.0;
  for (std::size_t j = 0; j < x.mesh().slot_count(); ++j) e = std::max(e, std::abs(x.value(j) - exact(x.mesh().slot_time(j))));
  return e;
}

}  // namespace

TEST_CASE("apply_T1: f = 0 and no impulses gives the boundary line") {
  ImpulsiveCoupledBVP p;
  p.boundary = {1.0, 0.0, 2.0, 0.0};
  const QuadratureConfig q;
  const auto m = build_meshes(p, q);
  const auto r = apply_T1(p, zero_pair(m), q);
  for (std::size_t j = 0; j < m.u->slot_count(); ++j) {
    CHECK(r.value.value(j) == doctest::Approx(1.0 + 2.0 * m.u->slot_time(j)).epsilon(1e-15));
    CHECK(r.value.deriv(j) == 2.0);
  }
  CHECK(r.value.tail_slope() == 2.0);
}

TEST_CASE("apply_T1: f = e^{-s} reproduces -(1 - e^{-t})") {
  ImpulsiveCoupledBVP p;
  p.f.eval = [](double s, double, double, double, double) { return std::exp(-s); };
  const QuadratureConfig q;
  const auto m = build_meshes(p, q);
  const auto r = apply_T1(p, zero_pair(m), q);
  CHECK(sup_error(r.value, [](double t) { return -1.0 + std::exp(-t); }) < 1e-8);
  double derr = 0.0;
  for (std::size_t j = 0; j < m.u->slot_count(); ++j) {
    const double t = m.u->slot_time(j);
    derr = std::max(derr, std::abs(r.value.deriv(j) + std::exp(-t) - std::exp(-q.horizon)));
  }
  CHECK(derr < 1e-12);
}

TEST_CASE("apply_T1: a value impulse gives a step at t = 1") {
  ImpulsiveCoupledBVP p;
  p.u_schedule = ImpulseSchedule::from_points({1.0});
  p.I0.eval = [](std::size_t, double, double, double) { return 1.0; };
  const QuadratureConfig q;
  const auto m = build_meshes(p, q);
  const auto r = apply_T1(p, zero_pair(m), q);
  for (std::size_t j = 0; j < m.u->slot_count(); ++j) {
    CHECK(r.value.value(j) == (fixtures::after(m.u->slot_time(j), m.u->slot_side(j), 1.0) ? 1.0 : 0.0));
  }
  CHECK(r.value.eval(1.0).value == 0.0);
  CHECK(r.value.eval(1.0, Side::Right).value == 1.0);
}

TEST_CASE("apply_T1: a slope impulse d gives -t d before and -d after") {
  const double d = 0.7;
  ImpulsiveCoupledBVP p;
  p.u_schedule = ImpulseSchedule::from_points({1.0});
  p.I1.eval = [d](std::size_t, double, double, double) { return d; };
  const QuadratureConfig q;
  const auto m = build_meshes(p, q);
  const auto r = apply_T1(p, zero_pair(m), q);
  for (std::size_t j = 0; j < m.u->slot_count(); ++j) {
    const double t = m.u->slot_time(j);
    const bool aft = fixtures::after(t, m.u->slot_side(j), 1.0);
    CHECK(r.value.value(j) == doctest::Approx(aft ? -d : -d * t).epsilon(1e-15));
    CHECK(r.value.deriv(j) == doctest::Approx(aft ? 0.0 : -d));
  }
  REQUIRE(r.value.jumps().size() == 1);
  CHECK(r.value.jumps()[0].dderiv == doctest::Approx(d));
}

TEST_CASE("apply_T: zero problem maps to the zero pair") {
  ImpulsiveCoupledBVP p;
  const QuadratureConfig q;
  const auto m = build_meshes(p, q);
  const auto r = apply_T(p, affine_pair(ImpulsiveCoupledBVP{.boundary = {1, 2, 3, 4}}, m), q);
  CHECK(norm_X(r.value) == 0.0);
}

TEST_CASE("apply_T: a decoupled problem splits into independent components") {
  ImpulsiveCoupledBVP p;
  p.f.eval = [](double t, double x, double, double z, double) { return 0.1 * std::exp(-t) * std::sin(x + z); };
  p.h.eval = [](double t, double, double y, double, double w) { return 0.2 * std::exp(-t) * std::cos(y * w); };
  p.boundary = {1.0, -1.0, 0.5, 0.25};
  const QuadratureConfig q;
  const auto m = build_meshes(p, q);
  const SolutionPair s{PiecewiseC1Function::affine(m.u, 0.3, 0.1), PiecewiseC1Function::affine(m.v, -0.2, 0.4)};
  const auto both = apply_T(p, s, q);
  const SolutionPair s_u_only{s.u, PiecewiseC1Function::affine(m.v, 9.0, -9.0)};
  const SolutionPair s_v_only{PiecewiseC1Function::affine(m.u, 9.0, -9.0), s.v};
  const auto u_alone = apply_T1(p, s_u_only, q);
  const auto v_alone = apply_T2(p, s_v_only, q);
  CHECK(distance_component(both.value.u, u_alone.value) == 0.0);
  CHECK(distance_component(both.value.v, v_alone.value) == 0.0);
}

TEST_CASE("apply_T: the pendulum image registers jumps at the integers") {
  const auto p = build_pendulum_problem(PendulumParams{});
  QuadratureConfig q;
  q.horizon = 10.0;
  const auto m = build_meshes(p, q);
  const SolutionPair s{PiecewiseC1Function::affine(m.u, 1.0, 0.5), PiecewiseC1Function::affine(m.v, 0.0, 0.5)};
  const auto r = apply_T(p, s, q);
  CHECK(std::isfinite(norm_X(r.value)));
  REQUIRE(r.value.u.jumps().size() == 9);
  REQUIRE(r.value.v.jumps().size() == 9);
  for (std::size_t k = 0; k < 9; ++k) {
    CHECK(r.value.u.jumps()[k].t == static_cast<double>(k + 1));
    CHECK(r.value.v.jumps()[k].t == static_cast<double>(k + 1));
  }
}

TEST_CASE("apply_T: boundary identities on random iterates") {
  auto p = fixtures::manufactured_problem();
  p.h.eval = [](double t, double x, double y, double, double) { return 0.3 * std::exp(-2 * t) * std::tanh(x - y); };
  p.v_schedule = ImpulseSchedule::from_points({0.5, 3.0});
  p.J0.eval = [](std::size_t k, double, double a, double) { return 0.1 * k * std::sin(a); };
  const QuadratureConfig q;
  const auto m = build_meshes(p, q);
  for (double a : {-1.0, 0.5, 3.0}) {
    const SolutionPair s{PiecewiseC1Function::affine(m.u, a, 0.2), PiecewiseC1Function::affine(m.v, -a, 0.1)};
    const auto r = apply_T(p, s, q);
    CHECK(r.value.u.value_at_origin() == p.boundary.A1);
    CHECK(r.value.v.value_at_origin() == p.boundary.A2);
    const auto rh = r.value.u.eval(q.horizon);
    CHECK(std::abs(rh.deriv - p.boundary.B1) <=
          r.truncation.integral_tail_estimate + r.truncation.impulse_tail_estimate + 1e-15);
  }
}

TEST_CASE("apply_T1: a non-finite f names the evaluation point") {
  ImpulsiveCoupledBVP p;
  p.f.eval = [](double t, double, double, double, double) { return t > 3.0 ? std::nan("") : 0.0; };
  const QuadratureConfig q;
  const auto m = build_meshes(p, q);
  try {
    apply_T1(p, zero_pair(m), q);
    FAIL("expected EvaluationError");
  } catch (const EvaluationError& e) {
    CHECK(e.point() > 3.0);
  }
}

TEST_CASE("apply_T1: unbounded tail without a bound sets the warning flag") {
  ImpulsiveCoupledBVP p;
  p.f.eval = [](double t, double, double, double, double) { return 1.0 / (1.0 + t * t); };
  QuadratureConfig q;
  q.horizon = 10.0;
  const auto m = build_meshes(p, q);
  const auto r = apply_T1(p, zero_pair(m), q);
  CHECK_FALSE(r.truncation.integral_tail_is_bound);
  CHECK(r.truncation.integral_tail_estimate > q.abs_tol);
  CHECK(r.truncation.warning);

  q.tail_bound_fn = [](double t) { return 1.0 / t; };
  const auto b = apply_T1(p, zero_pair(m), q);
  CHECK(b.truncation.integral_tail_is_bound);
  CHECK(b.truncation.integral_tail_estimate == doctest::Approx(0.1));
}

TEST_CASE("semiinfinite_integral: examples") {
  const QuadratureConfig q;
  CHECK(semiinfinite_integral([](double) { return 0.0; }, 1.0, q) == 0.0);
  const double v = semiinfinite_integral([](double s) { return kernel::green(2.0, s) * std::exp(-s); }, 2.0, q);
  CHECK(std::abs(v + (1.0 - std::exp(-2.0))) < 1e-8);

  auto stepped = [](double s) { return s < 1.0 ? std::cos(s) : 2.0 * std::exp(-s); };
  const std::vector<double> bp{1.0};
  const double whole = semiinfinite_integral(stepped, 0.0, q, bp);
  const double pieces = std::sin(1.0) + 2.0 * (std::exp(-1.0) - std::exp(-q.horizon));
  CHECK(std::abs(whole - pieces) < q.abs_tol);

  CHECK_THROWS_AS(semiinfinite_integral([](double s) { return s > 5 ? INFINITY : 0.0; }, 0.0, q), EvaluationError);
}

TEST_CASE("impulse_sums: examples") {
  const auto m = std::make_shared<const Mesh>(Mesh::piecewise_uniform(0.0, 10.0, std::vector{1.0}, std::vector{1.0}, 16, 0.05));
  const auto x = PiecewiseC1Function::zero(m);
  const auto c0 = [](double c) { return ImpulseMap{[c](std::size_t, double, double, double) { return c; }, "c"}; };

  const auto none = impulse_sums(ImpulseSchedule::none(), c0(1.0), c0(1.0), x, 3.0, 10.0);
  CHECK(none.partial_sum_at_t == 0.0);
  CHECK(none.full_sum_deriv == 0.0);

  const auto one = impulse_sums(ImpulseSchedule::from_points({1.0}), c0(0.3), c0(0.7), x, 3.0, 10.0);
  CHECK(one.partial_sum_at_t == doctest::Approx(0.3 + 2.0 * 0.7));
  CHECK(one.full_sum_deriv == doctest::Approx(0.7));
}

TEST_CASE("impulse_sums: pendulum slope impulses stay within the bound sequence") {
  const PendulumParams pp;
  const auto p = build_pendulum_problem(pp);
  const double rho = 1.0;
  const double H = 200.0;
  auto mesh = std::make_shared<const Mesh>(
      Mesh::piecewise_uniform(1.0, H, p.u_schedule.points_below(H), p.u_schedule.points_below(H), 2, 1.0));
  const auto x = PiecewiseC1Function::affine(mesh, 0.0, rho * 0.999);  // |x| < ρ(1+t), |x'| < ρ
  const auto r = impulse_sums(p.u_schedule, ImpulseMap::zero(), p.I1, x, H, H);
  const std::size_t K = p.u_schedule.count_below(H);
  double partial = 0.0;
  for (std::size_t k = 1; k <= K; ++k) partial += p.bounds->psi_seq(rho, k);
  CHECK(std::abs(r.full_sum_deriv) <= partial + p.bounds->psi_tail(rho, K));
}

TEST_CASE("apply_T1: FTC consistency of stored derivatives") {
  const auto p = fixtures::manufactured_problem();
  const QuadratureConfig q;
  const auto m = build_meshes(p, q);
  const auto r = apply_T1(p, affine_pair(p, m), q);
  for (std::size_t i = 0; i + 1 < m.u->size(); ++i) {
    const double h = m.u->time(i + 1) - m.u->time(i);
    const double trap = 0.5 * h * (r.value.right(i).deriv + r.value.left(i + 1).deriv);
    CHECK(std::abs(r.value.left(i + 1).value - r.value.right(i).value - trap) <= h * h * h);
  }
}
