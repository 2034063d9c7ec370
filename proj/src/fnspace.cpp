#include "halfline/fnspace.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace halfline {

// ---------------------------------------------------------------------------- Mesh

Mesh::Mesh(std::vector<double> times, std::vector<bool> doubled)
    : times_(std::move(times)), doubled_(std::move(doubled)) {
  if (times_.size() < 2) throw std::invalid_argument("Mesh: need at least two nodes");
  if (doubled_.size() != times_.size()) throw std::invalid_argument("Mesh: doubled flags size mismatch");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i])) throw std::invalid_argument("Mesh: non-finite node");
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw std::invalid_argument("Mesh: base times must be strictly increasing");
    }
  }
  if (times_.front() < 0.0) throw std::invalid_argument("Mesh: t0 must be >= 0");
  left_.resize(times_.size());
  std::size_t slot = 0;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    left_[i] = slot;
    slot_time_.push_back(times_[i]);
    slot_side_.push_back(Side::Left);
    ++slot;
    if (doubled_[i]) {
      slot_time_.push_back(times_[i]);
      slot_side_.push_back(Side::Right);
      ++slot;
    }
  }
}

Mesh Mesh::piecewise_uniform(double t0, double horizon, std::span<const double> breakpoints,
                             std::span<const double> doubled_points, std::size_t min_intervals,
                             double max_step) {
  if (!(horizon > t0) || t0 < 0.0) throw std::invalid_argument("Mesh: need 0 <= t0 < horizon");
  if (!(max_step > 0.0)) throw std::invalid_argument("Mesh: max_step must be positive");
  min_intervals = std::max<std::size_t>(min_intervals, 1);

  std::vector<double> cuts{t0};
  std::vector<double> inner(breakpoints.begin(), breakpoints.end());
  std::sort(inner.begin(), inner.end());
  for (double b : inner) {
    if (b > cuts.back() && b < horizon) cuts.push_back(b);
  }
  cuts.push_back(horizon);

  std::vector<double> times;
  for (std::size_t piece = 0; piece + 1 < cuts.size(); ++piece) {
    const double a = cuts[piece];
    const double b = cuts[piece + 1];
    const auto by_step = static_cast<std::size_t>(std::ceil((b - a) / max_step - 1e-9));
    const std::size_t n = std::max(min_intervals, by_step);
    times.push_back(a);
    for (std::size_t j = 1; j < n; ++j) {
      times.push_back(a + (b - a) * static_cast<double>(j) / static_cast<double>(n));
    }
  }
  times.push_back(horizon);

  std::vector<double> dbl(doubled_points.begin(), doubled_points.end());
  std::sort(dbl.begin(), dbl.end());
  std::vector<bool> doubled(times.size(), false);
  for (std::size_t i = 0; i < times.size(); ++i) {
    doubled[i] = std::binary_search(dbl.begin(), dbl.end(), times[i]) && times[i] < horizon;
  }
  return Mesh(std::move(times), std::move(doubled));
}

std::vector<std::size_t> Mesh::doubled_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (doubled_[i]) out.push_back(i);
  }
  return out;
}

std::optional<std::size_t> Mesh::index_of(double t) const {
  auto it = std::lower_bound(times_.begin(), times_.end(), t);
  const double tol = 1e-12 * (1.0 + std::abs(t));
  if (it != times_.end() && std::abs(*it - t) <= tol) {
    return static_cast<std::size_t>(it - times_.begin());
  }
  if (it != times_.begin() && std::abs(*(it - 1) - t) <= tol) {
    return static_cast<std::size_t>(it - times_.begin() - 1);
  }
  return std::nullopt;
}

std::size_t Mesh::interval(double t) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t i = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
  return std::min(i, times_.size() - 2);
}

bool Mesh::same_layout(const Mesh& other) const {
  return times_ == other.times_ && doubled_ == other.doubled_;
}

// ---------------------------------------------------------------------------- PiecewiseC1Function

PiecewiseC1Function::PiecewiseC1Function(std::shared_ptr<const Mesh> mesh, std::vector<double> values,
                                         std::vector<double> derivs, double tail_slope,
                                         std::vector<Jump> jumps)
    : mesh_(std::move(mesh)),
      values_(std::move(values)),
      derivs_(std::move(derivs)),
      tail_slope_(tail_slope),
      jumps_(std::move(jumps)) {
  if (!mesh_) throw std::invalid_argument("PiecewiseC1Function: null mesh");
  if (values_.size() != mesh_->slot_count() || derivs_.size() != mesh_->slot_count()) {
    throw std::invalid_argument("PiecewiseC1Function: slot data size does not match mesh");
  }
  std::sort(jumps_.begin(), jumps_.end(), [](const Jump& a, const Jump& b) { return a.t < b.t; });
}

PiecewiseC1Function PiecewiseC1Function::zero(std::shared_ptr<const Mesh> mesh) {
  const std::size_t n = mesh->slot_count();
  return PiecewiseC1Function(std::move(mesh), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0.0);
}

PiecewiseC1Function PiecewiseC1Function::affine(std::shared_ptr<const Mesh> mesh, double a, double b) {
  const std::size_t n = mesh->slot_count();
  std::vector<double> values(n);
  for (std::size_t j = 0; j < n; ++j) values[j] = a + b * mesh->slot_time(j);
  return PiecewiseC1Function(std::move(mesh), std::move(values), std::vector<double>(n, b), b);
}

PiecewiseC1Function PiecewiseC1Function::sample(std::shared_ptr<const Mesh> mesh,
                                                const std::function<double(double, Side)>& value,
                                                const std::function<double(double, Side)>& deriv,
                                                double tail_slope) {
  const std::size_t n = mesh->slot_count();
  std::vector<double> values(n), derivs(n);
  for (std::size_t j = 0; j < n; ++j) {
    values[j] = value(mesh->slot_time(j), mesh->slot_side(j));
    derivs[j] = deriv(mesh->slot_time(j), mesh->slot_side(j));
  }
  std::vector<Jump> jumps;
  for (std::size_t i : mesh->doubled_indices()) {
    const std::size_t l = mesh->left_slot(i);
    const std::size_t r = mesh->right_slot(i);
    jumps.push_back({mesh->time(i), values[r] - values[l], derivs[r] - derivs[l]});
  }
  return PiecewiseC1Function(std::move(mesh), std::move(values), std::move(derivs), tail_slope,
                             std::move(jumps));
}

PointValue PiecewiseC1Function::left(std::size_t i) const {
  const std::size_t j = mesh_->left_slot(i);
  return {values_[j], derivs_[j]};
}

PointValue PiecewiseC1Function::right(std::size_t i) const {
  const std::size_t j = mesh_->right_slot(i);
  return {values_[j], derivs_[j]};
}

PointValue PiecewiseC1Function::eval_in_interval(std::size_t i, double t) const {
  const PointValue a = right(i);
  const PointValue b = left(i + 1);
  const double t_a = mesh_->time(i);
  const double h = mesh_->time(i + 1) - t_a;
  const double s = (t - t_a) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  const double value = h00 * a.value + h10 * h * a.deriv + h01 * b.value + h11 * h * b.deriv;
  const double deriv = (6 * s2 - 6 * s) / h * a.value + (3 * s2 - 4 * s + 1) * a.deriv +
                       (6 * s - 6 * s2) / h * b.value + (3 * s2 - 2 * s) * b.deriv;
  return {value, deriv};
}

PointValue PiecewiseC1Function::eval(double t, Side side) const {
  const Mesh& m = *mesh_;
  if (t < m.t0()) {
    const PointValue first = left(0);
    return {first.value + first.deriv * (t - m.t0()), first.deriv};
  }
  if (t > m.horizon()) {
    const PointValue last = left(m.size() - 1);
    return {last.value + tail_slope_ * (t - m.horizon()), tail_slope_};
  }
  if (auto idx = m.index_of(t)) {
    return side == Side::Left ? left(*idx) : right(*idx);
  }
  return eval_in_interval(m.interval(t), t);
}

double PiecewiseC1Function::value_at_origin() const {
  const PointValue first = left(0);
  return first.value - first.deriv * mesh_->t0();
}

void PiecewiseC1Function::require_compatible(const PiecewiseC1Function& other) const {
  if (mesh_ != other.mesh_ && !mesh_->same_layout(*other.mesh_)) {
    throw std::invalid_argument("PiecewiseC1Function: arithmetic on different meshes");
  }
}

void PiecewiseC1Function::combine_jumps(const std::vector<Jump>& other, double factor) {
  for (const Jump& j : other) {
    auto it = std::lower_bound(jumps_.begin(), jumps_.end(), j.t,
                               [](const Jump& a, double t) { return a.t < t; });
    if (it != jumps_.end() && it->t == j.t) {
      it->dvalue += factor * j.dvalue;
      it->dderiv += factor * j.dderiv;
    } else {
      jumps_.insert(it, Jump{j.t, factor * j.dvalue, factor * j.dderiv});
    }
  }
}

PiecewiseC1Function& PiecewiseC1Function::operator+=(const PiecewiseC1Function& other) {
  require_compatible(other);
  for (std::size_t j = 0; j < values_.size(); ++j) {
    values_[j] += other.values_[j];
    derivs_[j] += other.derivs_[j];
  }
  tail_slope_ += other.tail_slope_;
  combine_jumps(other.jumps_, 1.0);
  return *this;
}

PiecewiseC1Function& PiecewiseC1Function::operator-=(const PiecewiseC1Function& other) {
  require_compatible(other);
  for (std::size_t j = 0; j < values_.size(); ++j) {
    values_[j] -= other.values_[j];
    derivs_[j] -= other.derivs_[j];
  }
  tail_slope_ -= other.tail_slope_;
  combine_jumps(other.jumps_, -1.0);
  return *this;
}

PiecewiseC1Function& PiecewiseC1Function::operator*=(double lambda) {
  for (std::size_t j = 0; j < values_.size(); ++j) {
    values_[j] *= lambda;
    derivs_[j] *= lambda;
  }
  tail_slope_ *= lambda;
  for (Jump& j : jumps_) {
    j.dvalue *= lambda;
    j.dderiv *= lambda;
  }
  return *this;
}

PiecewiseC1Function operator+(PiecewiseC1Function a, const PiecewiseC1Function& b) { return a += b; }
PiecewiseC1Function operator-(PiecewiseC1Function a, const PiecewiseC1Function& b) { return a -= b; }
PiecewiseC1Function operator*(double lambda, PiecewiseC1Function a) { return a *= lambda; }

SolutionPair operator+(const SolutionPair& a, const SolutionPair& b) { return {a.u + b.u, a.v + b.v}; }
SolutionPair operator-(const SolutionPair& a, const SolutionPair& b) { return {a.u - b.u, a.v - b.v}; }
SolutionPair operator*(double lambda, const SolutionPair& a) { return {lambda * a.u, lambda * a.v}; }

// ---------------------------------------------------------------------------- norms

double norm_weighted_sup(const PiecewiseC1Function& x) {
  const Mesh& m = x.mesh();
  double best = std::abs(x.tail_slope());
  if (m.t0() > 0.0) best = std::max(best, std::abs(x.value_at_origin()));
  for (std::size_t j = 0; j < m.slot_count(); ++j) {
    best = std::max(best, std::abs(x.value(j)) / (1.0 + m.slot_time(j)));
  }
  return best;
}

double norm_deriv_sup(const PiecewiseC1Function& x) {
  double best = std::abs(x.tail_slope());
  for (double d : x.derivs()) best = std::max(best, std::abs(d));
  return best;
}

double norm_component(const PiecewiseC1Function& x) {
  return std::max(norm_weighted_sup(x), norm_deriv_sup(x));
}

double norm_X(const SolutionPair& s) { return std::max(norm_component(s.u), norm_component(s.v)); }

double distance_component(const PiecewiseC1Function& a, const PiecewiseC1Function& b) {
  double best = std::abs(a.tail_slope() - b.tail_slope());
  auto visit = [&](double t, Side side) {
    const PointValue pa = a.eval(t, side);
    const PointValue pb = b.eval(t, side);
    best = std::max(best, std::abs(pa.value - pb.value) / (1.0 + t));
    best = std::max(best, std::abs(pa.deriv - pb.deriv));
  };
  visit(0.0, Side::Left);
  for (const PiecewiseC1Function* f : {&a, &b}) {
    const Mesh& m = f->mesh();
    for (std::size_t j = 0; j < m.slot_count(); ++j) visit(m.slot_time(j), m.slot_side(j));
  }
  return best;
}

double distance_X(const SolutionPair& a, const SolutionPair& b) {
  return std::max(distance_component(a.u, b.u), distance_component(a.v, b.v));
}

// ---------------------------------------------------------------------------- jumps

PiecewiseC1Function apply_jump(const PiecewiseC1Function& x, double p, double dv, double dd) {
  const Mesh& m = x.mesh();
  const auto idx = m.index_of(p);
  if (!idx || !m.doubled(*idx)) {
    throw std::invalid_argument("apply_jump: " + std::to_string(p) + " is not an impulse node of the mesh");
  }
  PiecewiseC1Function out = x;
  const double tp = m.time(*idx);
  auto& values = out.mutable_values();
  auto& derivs = out.mutable_derivs();
  for (std::size_t j = m.right_slot(*idx); j < m.slot_count(); ++j) {
    values[j] += dv + dd * (m.slot_time(j) - tp);
    derivs[j] += dd;
  }
  out.set_tail_slope(out.tail_slope() + dd);
  auto& jumps = out.mutable_jumps();
  auto it = std::lower_bound(jumps.begin(), jumps.end(), tp, [](const Jump& a, double t) { return a.t < t; });
  if (it != jumps.end() && it->t == tp) {
    it->dvalue += dv;
    it->dderiv += dd;
  } else {
    jumps.insert(it, Jump{tp, dv, dd});
  }
  return out;
}

// ---------------------------------------------------------------------------- CSV

void write_csv(std::ostream& out, const PiecewiseC1Function& x) {
  const Mesh& m = x.mesh();
  std::ostringstream buf;
  buf.precision(17);
  buf << "t,side,value,deriv\n";
  for (std::size_t j = 0; j < m.slot_count(); ++j) {
    buf << m.slot_time(j) << ',' << (m.slot_side(j) == Side::Right ? '+' : '-') << ',' << x.value(j)
        << ',' << x.deriv(j) << '\n';
  }
  out << buf.str();
}

PiecewiseC1Function read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_csv: empty input");
  std::vector<double> times, values, derivs;
  std::vector<bool> doubled;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string t_s, side_s, v_s, d_s;
    if (!std::getline(row, t_s, ',') || !std::getline(row, side_s, ',') || !std::getline(row, v_s, ',') ||
        !std::getline(row, d_s)) {
      throw std::runtime_error("read_csv: malformed line " + std::to_string(lineno));
    }
    const double t = std::stod(t_s);
    if (side_s == "+") {
      if (times.empty() || times.back() != t || doubled.back()) {
        throw std::runtime_error("read_csv: '+' slot without matching '-' slot at line " +
                                 std::to_string(lineno));
      }
      doubled.back() = true;
    } else {
      times.push_back(t);
      doubled.push_back(false);
    }
    values.push_back(std::stod(v_s));
    derivs.push_back(std::stod(d_s));
  }
  auto mesh = std::make_shared<const Mesh>(times, doubled);
  const double tail = derivs.empty() ? 0.0 : derivs.back();
  std::vector<Jump> jumps;
  for (std::size_t i : mesh->doubled_indices()) {
    const std::size_t l = mesh->left_slot(i);
    const std::size_t r = mesh->right_slot(i);
    jumps.push_back({mesh->time(i), values[r] - values[l], derivs[r] - derivs[l]});
  }
  return PiecewiseC1Function(std::move(mesh), std::move(values), std::move(derivs), tail, std::move(jumps));
}

}  // namespace halfline
