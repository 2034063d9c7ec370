#include "halfline/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace halfline {

BoundSequence power_law_sequence(double a, double b, double exponent) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(exponent)) {
    throw std::invalid_argument("power_law_sequence: coefficients must be finite");
  }
  a = std::abs(a);
  b = std::abs(b);
  return [a, b, exponent](double rho, std::size_t k) {
    const double kk = static_cast<double>(k);
    return rho * (a * (1.0 + kk) + b) / std::pow(kk, exponent);
  };
}

SequenceTailBound power_law_tail(double a, double b, double exponent) {
  if (!(exponent > 2.0)) throw std::invalid_argument("power_law_tail: exponent must exceed 2");
  a = std::abs(a);
  b = std::abs(b);
  return [a, b, exponent](double rho, std::size_t K) {
    if (K == 0) return std::numeric_limits<double>::infinity();
    const double x = static_cast<double>(K);
    // Σ_{k>K} k^-q <= ∫_K^∞ s^-q ds for decreasing summands
    return rho * ((a + b) / ((exponent - 1.0) * std::pow(x, exponent - 1.0)) +
                  a / ((exponent - 2.0) * std::pow(x, exponent - 2.0)));
  };
}

}  // namespace halfline
