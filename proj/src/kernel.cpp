#include "halfline/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace halfline::kernel {

double green(double t, double s) {
  if (!(t >= 0.0) || !(s >= 0.0)) throw std::domain_error("green: arguments must be >= 0");
  return t <= s ? -t : -s;
}

double kernel_weight_sup(double s) {
  if (!(s >= 0.0)) throw std::domain_error("kernel_weight_sup: s must be >= 0");
  return s / (1.0 + s);
}

// The supremand is a ratio of affine functions, hence monotone in t: the sup is
// the value at t = 0 or the limit at infinity.
double boundary_weight_sup(double A, double B) { return std::max(std::abs(A), std::abs(B)); }

}  // namespace halfline::kernel
