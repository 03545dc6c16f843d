#pragma once

// Beam-splitter loss (amplitude damping) on each mode.

#include "noon/fock.hpp"

namespace noon::channels {

using fock::FixedNState;
using fock::SectorDensityMatrix;
using fock::TwoModeDensityMatrix;

/// Transmission probabilities per mode.
struct LossSetting {
  double eta_a = 1.0;
  double eta_b = 1.0;

  static LossSetting uniform(double eta) { return {eta, eta}; }
  bool symmetric() const { return eta_a == eta_b; }
};

/// Throws ValidationError if either transmission lies outside [0, 1].
void validate(const LossSetting& loss);

/// Kraus amplitude sqrt(C(n,k) eta^(n-k) (1-eta)^k) for losing k of n quanta.
double kraus_amplitude(int n, int k, double eta);

/// Dense route: per-mode Kraus sums on the flattened matrix.
TwoModeDensityMatrix apply_loss(const TwoModeDensityMatrix& rho, const LossSetting& loss);

/// Sector route: one Kraus branch (k lost from a, l from b) at a time.
SectorDensityMatrix apply_loss(const FixedNState& state, const LossSetting& loss);
SectorDensityMatrix apply_loss(const SectorDensityMatrix& rho, const LossSetting& loss);

/// <a_det^dag^n b_det^n>. Equal transmissions use eta^n times the undetected
/// moment; unequal ones go through apply_loss.
complex detected_moment(const FixedNState& state, int n, const LossSetting& loss);
complex detected_moment(const TwoModeDensityMatrix& rho, int n, const LossSetting& loss);

}  // namespace noon::channels
