#pragma once

// Two-mode Fock-space algebra: fixed-N pure states, truncated density
// matrices, normally ordered ladder-operator moments and Schwinger spin
// moments.
//
// Basis convention: a fixed-N amplitude d_m multiplies |N-m>_a |m>_b, so the
// index m is the b-mode occupation and 2j_z = N - 2m.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <map>
#include <span>
#include <vector>

#include "noon/common.hpp"

namespace noon::fock {

// ---------------------------------------------------------------------------
// Factorials in log space.

/// ln(n!) for n >= 0. Exact-summed table up to a few thousand, lgamma above.
double log_factorial(int n);

/// ln(n! / (n-k)!), the falling factorial n(n-1)...(n-k+1); requires 0 <= k <= n.
double log_falling_factorial(int n, int k);

/// ln C(n, k); requires 0 <= k <= n.
double log_binomial(int n, int k);

// ---------------------------------------------------------------------------
// States.

/// Pure state with a fixed total number N: sum_m d_m |N-m>_a |m>_b.
class FixedNState {
 public:
  /// Normalizes the amplitudes. Throws ValidationError when the length is not
  /// N+1 or the vector has zero norm.
  FixedNState(int total_number, std::vector<complex> amplitudes);

  int total_number() const { return total_; }
  std::span<const complex> amplitudes() const { return amps_; }
  complex amplitude(int m) const { return amps_.at(static_cast<std::size_t>(m)); }
  double probability(int m) const { return std::norm(amplitude(m)); }

  /// Amplitudes as an Eigen column vector (index m).
  Eigen::VectorXcd vector() const;

 private:
  int total_;
  std::vector<complex> amps_;
};

/// Hermitian, unit-trace matrix over |n_a, n_b> with 0 <= n_a, n_b <= cutoff.
/// Flattened index: n_a * (cutoff + 1) + n_b.
class TwoModeDensityMatrix {
 public:
  /// Validates hermiticity, trace, diagonal sign and the 2x2-minor positivity
  /// condition; throws ValidationError on failure.
  TwoModeDensityMatrix(int cutoff, Eigen::MatrixXcd entries);

  int cutoff() const { return cutoff_; }
  int dimension() const { return cutoff_ + 1; }
  Eigen::Index index(int na, int nb) const { return na * (cutoff_ + 1) + nb; }

  const Eigen::MatrixXcd& entries() const { return rho_; }
  complex element(int na, int nb, int ma, int mb) const {
    return rho_(index(na, nb), index(ma, mb));
  }
  double probability(int na, int nb) const { return rho_(index(na, nb), index(na, nb)).real(); }

 private:
  int cutoff_;
  Eigen::MatrixXcd rho_;
};

/// Density matrix commuting with the total number: one block per total s,
/// block(s)(m, m') = <s-m, m| rho |s-m', m'>. Represents loss-channel outputs
/// of fixed-N states without the (cutoff+1)^2-squared dense footprint.
class SectorDensityMatrix {
 public:
  /// blocks[s] must be (s+1) x (s+1). Validates hermiticity, trace and
  /// diagonal sign.
  explicit SectorDensityMatrix(std::vector<Eigen::MatrixXcd> blocks);

  int max_total() const { return static_cast<int>(blocks_.size()) - 1; }
  const Eigen::MatrixXcd& block(int total) const { return blocks_.at(static_cast<std::size_t>(total)); }
  double probability(int na, int nb) const;

 private:
  std::vector<Eigen::MatrixXcd> blocks_;
};

TwoModeDensityMatrix to_density_matrix(const FixedNState& state);
/// Dense form with the given cutoff (default: the largest total number).
TwoModeDensityMatrix to_density_matrix(const SectorDensityMatrix& rho, int cutoff = -1);

SectorDensityMatrix to_sectors(const FixedNState& state);
/// Keeps the number-conserving part of rho. Coherences between different
/// total numbers are dropped; no number-conserving observable sees them.
SectorDensityMatrix to_sectors(const TwoModeDensityMatrix& rho);

// ---------------------------------------------------------------------------
// Moments.

/// Normally ordered product (a^dag)^p (b^dag)^q a^r b^s.
struct OperatorMonomial {
  int p = 0;
  int q = 0;
  int r = 0;
  int s = 0;

  OperatorMonomial() = default;
  OperatorMonomial(int p_, int q_, int r_, int s_);

  /// (a^dag)^n b^n.
  static OperatorMonomial correlation(int n) { return {n, 0, 0, n}; }
  bool conserves_number() const { return p + q == r + s; }
};

/// Tr(rho (a^dag)^p (b^dag)^q a^r b^s). Factorial weights are accumulated in
/// log space; the result itself is a double and overflows for very large N
/// (use moment_scaled there).
complex moment(const FixedNState& state, const OperatorMonomial& mono);
/// Throws TruncationError if any exponent exceeds the cutoff.
complex moment(const TwoModeDensityMatrix& rho, const OperatorMonomial& mono);
complex moment(const SectorDensityMatrix& rho, const OperatorMonomial& mono);

/// moment(...) * exp(-log_scale), evaluated without forming the unscaled value.
complex moment_scaled(const FixedNState& state, const OperatorMonomial& mono, double log_scale);
complex moment_scaled(const SectorDensityMatrix& rho, const OperatorMonomial& mono, double log_scale);

/// One order-n coherence: value = <n', m'+n| rho |n'+n, m'>, together with the
/// populations of the two linked number states.
struct OrderElement {
  int lower_a = 0;  // n'
  int lower_b = 0;  // m'
  complex value;
  double p_left = 0.0;   // P(n_a = n', n_b = m'+n)
  double p_right = 0.0;  // P(n_a = n'+n, n_b = m')
};

std::vector<OrderElement> order_elements(const FixedNState& state, int n);
std::vector<OrderElement> order_elements(const SectorDensityMatrix& rho, int n);
std::vector<OrderElement> order_elements(const TwoModeDensityMatrix& rho, int n);

/// Schwinger moments. J_theta = J_x cos(theta) + J_y sin(theta).
struct SchwingerMoments {
  double jx = 0, jy = 0, jz = 0, ntot = 0;
  double jx2 = 0, jy2 = 0, jz2 = 0;
  double jxy_sym = 0;  // <{J_x, J_y}>
  std::map<double, double> third;  // theta -> <J_theta^3>

  double var_x() const { return jx2 - jx * jx; }
  double var_y() const { return jy2 - jy * jy; }
  double var_z() const { return jz2 - jz * jz; }
  /// <J_theta^2> from the stored second moments.
  double second_at(double theta) const;
  /// Third moment at a requested angle; throws ValidationError if absent.
  double third_at(double theta) const;
};

SchwingerMoments schwinger_moments(const FixedNState& state, std::span<const double> angles = {});
SchwingerMoments schwinger_moments(const SectorDensityMatrix& rho, std::span<const double> angles = {});
SchwingerMoments schwinger_moments(const TwoModeDensityMatrix& rho, std::span<const double> angles = {});

/// J_x, J_y, J_z on the total-number-s sector, basis |s-m, m>.
struct SpinBlock {
  Eigen::SparseMatrix<complex> jx, jy, jz;
};
SpinBlock spin_block(int total);

/// P(2j_z) keyed by n_a - n_b; zero-probability outcomes are omitted.
std::map<int, double> number_distribution(const FixedNState& state);
std::map<int, double> number_distribution(const SectorDensityMatrix& rho);
std::map<int, double> number_distribution(const TwoModeDensityMatrix& rho);

}  // namespace noon::fock
