#pragma once

// Mode rotations c = (a + b e^{i phi})/sqrt2, d = (a - b e^{i phi})/sqrt2,
// output-intensity fringes, binned-count probability scans with their
// Fourier content, and the spin / quadrature measurement identities.

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

#include "noon/fock.hpp"

namespace noon::interferometry {

using fock::FixedNState;
using fock::SectorDensityMatrix;

/// Columns: |N-m, m>_{ab} expanded in |N-j, j>_{cd} at phi = 0.
Eigen::MatrixXcd rotation_matrix(int total);

/// The state in the (c, d) basis, index j = n_d. A nonzero d_phase rotates
/// the d mode further, d -> e^{i d_phase} d.
FixedNState rotate_modes(const FixedNState& state, double phi, double d_phase = 0.0);
SectorDensityMatrix rotate_modes(const SectorDensityMatrix& rho, double phi, double d_phase = 0.0);

/// Unitary inverse of rotate_modes with the same arguments.
FixedNState unrotate_modes(const FixedNState& state, double phi, double d_phase = 0.0);

/// <c^dag c - d^dag d> = 2 Re(e^{i phi} <a^dag b>).
double intensity_difference(const FixedNState& state, double phi);
/// Half the peak-to-peak swing of <I_D> over phi, 2 |<a^dag b>|.
double visibility(const FixedNState& state);
/// (max - min) / 2 of sampled fringe values.
double fringe_visibility(const std::vector<double>& values);

/// Uniform grid 2 pi k / K, k = 0..K-1.
std::vector<double> phase_grid(int k);

/// |(1/K) sum_k f_k e^{-i w phi_k}| for w = 0..K/2.
std::vector<double> dft_magnitudes(const std::vector<double>& values);
/// Complex coefficient (1/K) sum_k f_k e^{-i w phi_k}.
complex dft_coefficient(const std::vector<double>& values, int omega);
/// Largest magnitude at w >= 1 (lowest w on ties).
int dominant_frequency(const std::vector<double>& spectrum);

struct FringeScan {
  std::vector<double> phases;
  int bin_threshold = 0;                 // M
  std::vector<double> probabilities;     // P(n_c >= M) per phase
  std::vector<double> spectrum;          // per integer w in [0, K/2]
  int peak = 0;
};

/// Exact P(n_c >= M)(phi) from the rotated number distribution. K must be
/// a power of two, 0 <= M <= N.
FringeScan binned_probability_scan(const FixedNState& state, int m, int k = 256);

/// <c^dag^n c^n>(phi) on the uniform grid.
struct NormalOrderedScan {
  int order = 0;
  std::vector<double> phases;
  std::vector<double> values;
};
NormalOrderedScan normally_ordered_scan(const FixedNState& state, int n, int k = 256);

/// <a^dag^n b^n> = 2^n times the e^{i n phi} Fourier coefficient. Throws
/// ValidationError when the grid aliases (K <= 2n).
complex moment_from_fringes(const NormalOrderedScan& scan);

// ---------------------------------------------------------------------------
// Measurement identities.

enum class ThirdOrderVariant { plus, minus };
enum class FirstQuadratureVariant { symmetric, antisymmetric };

/// Third-order spin combination for <(a^dag b)^3>, with J = J_{pi/4} and
/// G = J_{3 pi/4}:
///   plus:  2Jx^3 - sqrt2 (J^3 + G^3) - 2i Jy^3 + i sqrt2 (J^3 + G^3)
///   minus: 2Jx^3 - sqrt2 (J^3 - G^3) - 2i Jy^3 + i sqrt2 (J^3 + G^3)
/// First-order quadrature form of <a^dag b>:
///   symmetric:     XX + PP - i (P_A X_B + X_A P_B)
///   antisymmetric: XX + PP + i (X_A P_B - P_A X_B)

struct IdentityCheck {
  std::string name;
  std::string variant;
  double max_deviation = 0.0;
  bool holds = false;
};

/// Operator-matrix checks on the two-mode space truncated at `cutoff`
/// quanta per mode (operators are built with padding so products are exact
/// on the checked block).
std::vector<IdentityCheck> validate_identities(int cutoff = 6, double tolerance = kEqualityTolerance);

/// Variants that pass validation (computed once per process). Throws
/// NumericalError if neither candidate is exact.
ThirdOrderVariant selected_third_order_variant();
FirstQuadratureVariant selected_first_quadrature_variant();
std::string to_string(ThirdOrderVariant v);
std::string to_string(FirstQuadratureVariant v);

/// <a^dag^n b^n> from Schwinger moments, n in {1, 2, 3}.
complex moment_from_spins(const FixedNState& state, int n);
complex moment_from_spins(const SectorDensityMatrix& rho, int n);
complex moment_from_spins(const fock::SchwingerMoments& moments, int n);
/// Angles whose third moments moment_from_spins(moments, 3) needs.
std::vector<double> third_order_angles();

/// Quadrature moments with X = (a + a^dag)/2, P = (a - a^dag)/(2i),
/// X_theta = X cos(theta) + P sin(theta), R = X_{pi/4}.
struct QuadratureMoments {
  // First order cross terms.
  double xx = 0, pp = 0, xp = 0, px = 0;  // <X_A X_B>, <P_A P_B>, <X_A P_B>, <P_A X_B>
  // table[i][j] = <Q_i(A) Q_j(B)> with Q = (X^2, P^2, R^2).
  double table[3][3] = {};
  // Single-mode second moments per mode (0 = A, 1 = B).
  double x2[2] = {}, p2[2] = {}, xp_sym[2] = {}, r2[2] = {};
};

using MomentOracle = std::function<complex(const fock::OperatorMonomial&)>;
QuadratureMoments quadrature_moments(const MomentOracle& moment);
QuadratureMoments quadrature_moments(const FixedNState& state);

/// <a^dag^n b^n> from quadrature moments, n in {1, 2}.
complex moment_from_quadratures(const QuadratureMoments& q, int n);
complex moment_from_quadratures(const FixedNState& state, int n);

}  // namespace noon::interferometry
