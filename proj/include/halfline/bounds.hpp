#pragma once

#include <cstddef>
#include <functional>
#include <string>

namespace halfline {

/// Dominating function Φ_ρ(t) (or Ψ_ρ(t)) for a right-hand side.
using BoundFunction = std::function<double(double rho, double t)>;
/// Dominating sequence χ_{k,ρ} for an impulse family; k is 1-based.
using BoundSequence = std::function<double(double rho, std::size_t k)>;
/// Upper bound of ∫_t^∞ Φ_ρ(s) ds.
using IntegralTailBound = std::function<double(double rho, double t)>;
/// Upper bound of Σ_{k>K} χ_{k,ρ}.
using SequenceTailBound = std::function<double(double rho, std::size_t K)>;
/// Restricts the state region on which the bounds are claimed (e.g. a positive length).
using StatePredicate = std::function<bool(double t, double x, double y, double z, double w)>;

/// Bound data for the existence hypotheses: Φ_ρ, Ψ_ρ for f and h, and the four
/// impulse bound sequences (φ_{k,ρ} for I0, ψ_{k,ρ} for I1, φ_{j,ρ} for J0, ϑ_{j,ρ} for J1).
/// Any member may be empty; consumers report which ones they needed.
struct CaratheodoryBounds {
  BoundFunction Phi;
  BoundFunction Psi;
  BoundSequence phi_seq;
  BoundSequence psi_seq;
  BoundSequence phij_seq;
  BoundSequence thetaj_seq;

  IntegralTailBound Phi_tail;
  IntegralTailBound Psi_tail;
  SequenceTailBound phi_tail;
  SequenceTailBound psi_tail;
  SequenceTailBound phij_tail;
  SequenceTailBound thetaj_tail;

  StatePredicate admissible;
  std::string admissible_description;
};

/// χ_{k,ρ} = ρ (|a| (1 + k) + |b|) / k^exponent: the bound of a linear impulse map
/// (a x + b x') / k^exponent on the box |x| < ρ (1 + k), |x'| < ρ at p_k = k.
BoundSequence power_law_sequence(double a, double b, double exponent);

/// Integral-test bound of Σ_{k>K} of power_law_sequence; needs exponent > 2.
SequenceTailBound power_law_tail(double a, double b, double exponent);

}  // namespace halfline
