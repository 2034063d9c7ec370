#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace halfline {

enum class Side : unsigned char { Left, Right };

/// Node set on [t0, horizon]. Each base time carries one slot, or two when it is an
/// impulse point of the function living on the mesh (left-limit slot, then right-limit slot).
class Mesh {
 public:
  Mesh(std::vector<double> times, std::vector<bool> doubled);

  /// Uniform subdivision of every piece between consecutive breakpoints (t0, the
  /// breakpoints inside (t0, horizon), horizon). Each piece gets at least
  /// `min_intervals` intervals and no interval is longer than `max_step`.
  /// Base times equal to one of `doubled_points` are doubled.
  static Mesh piecewise_uniform(double t0, double horizon, std::span<const double> breakpoints,
                                std::span<const double> doubled_points, std::size_t min_intervals,
                                double max_step);

  double t0() const noexcept { return times_.front(); }
  double horizon() const noexcept { return times_.back(); }

  std::size_t size() const noexcept { return times_.size(); }
  std::size_t slot_count() const noexcept { return slot_time_.size(); }

  double time(std::size_t i) const { return times_[i]; }
  bool doubled(std::size_t i) const { return doubled_[i]; }
  std::size_t left_slot(std::size_t i) const { return left_[i]; }
  std::size_t right_slot(std::size_t i) const { return left_[i] + (doubled_[i] ? 1 : 0); }

  double slot_time(std::size_t j) const { return slot_time_[j]; }
  /// Left for the first slot of a doubled node and for single slots.
  Side slot_side(std::size_t j) const { return slot_side_[j]; }

  const std::vector<double>& times() const noexcept { return times_; }
  std::vector<std::size_t> doubled_indices() const;

  /// Index of the base time equal to `t` (to 1e-12 relative), if any.
  std::optional<std::size_t> index_of(double t) const;
  /// Largest i with time(i) <= t, clamped to [0, size() - 2].
  std::size_t interval(double t) const;

  bool same_layout(const Mesh& other) const;

 private:
  std::vector<double> times_;
  std::vector<bool> doubled_;
  std::vector<std::size_t> left_;
  std::vector<double> slot_time_;
  std::vector<Side> slot_side_;
};

/// A registered impulse of a piecewise function: x(t+) - x(t-) and x'(t+) - x'(t-).
struct Jump {
  double t;
  double dvalue;
  double dderiv;
};

struct PointValue {
  double value;
  double deriv;
};

/// Piecewise C^1 function on a Mesh: value and derivative per slot, cubic Hermite
/// interpolation between slots of a smooth piece, affine extensions below t0 (using the
/// first slot's derivative) and above the horizon (using `tail_slope`).
/// At an impulse time the function value is the left slot.
class PiecewiseC1Function {
 public:
  PiecewiseC1Function(std::shared_ptr<const Mesh> mesh, std::vector<double> values,
                      std::vector<double> derivs, double tail_slope, std::vector<Jump> jumps = {});

  static PiecewiseC1Function zero(std::shared_ptr<const Mesh> mesh);
  static PiecewiseC1Function affine(std::shared_ptr<const Mesh> mesh, double a, double b);
  /// Samples value/derivative callables at every slot; jumps are read off doubled slots.
  static PiecewiseC1Function sample(std::shared_ptr<const Mesh> mesh,
                                    const std::function<double(double, Side)>& value,
                                    const std::function<double(double, Side)>& deriv,
                                    double tail_slope);

  const Mesh& mesh() const noexcept { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const noexcept { return mesh_; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> derivs() const noexcept { return derivs_; }
  double value(std::size_t slot) const { return values_[slot]; }
  double deriv(std::size_t slot) const { return derivs_[slot]; }
  double tail_slope() const noexcept { return tail_slope_; }
  const std::vector<Jump>& jumps() const noexcept { return jumps_; }

  PointValue left(std::size_t i) const;
  PointValue right(std::size_t i) const;

  /// Value and derivative at t; at a doubled node `side` selects the one-sided limit.
  PointValue eval(double t, Side side = Side::Left) const;
  /// Hermite interpolation strictly inside base interval [time(i), time(i+1)].
  PointValue eval_in_interval(std::size_t i, double t) const;
  /// Function value extrapolated to t = 0 along the head extension.
  double value_at_origin() const;

  PiecewiseC1Function& operator+=(const PiecewiseC1Function& other);
  PiecewiseC1Function& operator-=(const PiecewiseC1Function& other);
  PiecewiseC1Function& operator*=(double lambda);

  /// Mutable access used by builders; callers keep the jump registry consistent.
  std::vector<double>& mutable_values() noexcept { return values_; }
  std::vector<double>& mutable_derivs() noexcept { return derivs_; }
  std::vector<Jump>& mutable_jumps() noexcept { return jumps_; }
  void set_tail_slope(double m) noexcept { tail_slope_ = m; }

 private:
  void require_compatible(const PiecewiseC1Function& other) const;
  void combine_jumps(const std::vector<Jump>& other, double factor);

  std::shared_ptr<const Mesh> mesh_;
  std::vector<double> values_;
  std::vector<double> derivs_;
  double tail_slope_;
  std::vector<Jump> jumps_;
};

PiecewiseC1Function operator+(PiecewiseC1Function a, const PiecewiseC1Function& b);
PiecewiseC1Function operator-(PiecewiseC1Function a, const PiecewiseC1Function& b);
PiecewiseC1Function operator*(double lambda, PiecewiseC1Function a);

struct SolutionPair {
  PiecewiseC1Function u;
  PiecewiseC1Function v;
};

SolutionPair operator+(const SolutionPair& a, const SolutionPair& b);
SolutionPair operator-(const SolutionPair& a, const SolutionPair& b);
SolutionPair operator*(double lambda, const SolutionPair& a);

/// ||x||_0 = sup_t |x(t)| / (1 + t), evaluated over all slots plus the head point t = 0
/// and the affine tail's limit |tail_slope|.
double norm_weighted_sup(const PiecewiseC1Function& x);
/// ||x'||_1 = sup_t |x'(t)|, over all slots and the tail slope.
double norm_deriv_sup(const PiecewiseC1Function& x);
/// max(||x||_0, ||x'||_1).
double norm_component(const PiecewiseC1Function& x);
/// ||(u, v)||_X = max(||u||_0, ||u'||_1, ||v||_0, ||v'||_1).
double norm_X(const SolutionPair& s);

/// ||a - b||_X-type distance for functions on possibly different meshes: both are evaluated
/// at every slot of either mesh (both one-sided limits at doubled nodes), at t = 0, and the
/// affine tails are compared beyond the larger horizon.
double distance_component(const PiecewiseC1Function& a, const PiecewiseC1Function& b);
double distance_X(const SolutionPair& a, const SolutionPair& b);

/// Adds an impulse (dv, dd) at the doubled node p: every slot from the right slot of p on
/// is shifted by dv + dd (t - p) in value and dd in derivative; the registry is updated.
/// Throws std::invalid_argument if p is not a doubled node.
PiecewiseC1Function apply_jump(const PiecewiseC1Function& x, double p, double dv, double dd);

/// CSV with header `t,side,value,deriv`; side is `-` for left/single slots, `+` for right slots.
void write_csv(std::ostream& out, const PiecewiseC1Function& x);
/// Inverse of write_csv. The tail slope is taken from the last derivative and the jump
/// registry is read off the doubled slots.
PiecewiseC1Function read_csv(std::istream& in);

}  // namespace halfline
