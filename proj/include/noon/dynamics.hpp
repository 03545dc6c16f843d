#pragma once

// Two-mode Josephson Hamiltonian
//   H = kappa (a^dag b + b^dag a) + (g/2)(a^dag^2 a^2 + b^dag^2 b^2)
// on the fixed-N sector, spectral time evolution, tunnelling period and
// coherence tracking. Times are in units of 1/kappa when kappa = 1.

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "noon/coherence.hpp"
#include "noon/fock.hpp"

namespace noon::dynamics {

using fock::FixedNState;

class JosephsonSystem {
 public:
  /// Builds H and its eigendecomposition. N >= 1, finite g and kappa.
  JosephsonSystem(int total_number, double nonlinearity, double coupling);

  int total_number() const { return total_; }
  double nonlinearity() const { return g_; }
  double coupling() const { return kappa_; }
  const Eigen::MatrixXd& hamiltonian() const { return h_; }
  /// Ascending. Diagonalized in long double; these are rounded copies.
  const Eigen::VectorXd& eigenvalues() const { return energies_; }
  /// Columns are eigenvectors.
  const Eigen::MatrixXd& eigenvectors() const { return vectors_; }

  /// d(t) = V exp(-i E t) V^T d(0), without renormalization. Phases are
  /// reduced in long double so t far beyond 1/|E| keeps relative phases.
  Eigen::VectorXcd evolve_amplitudes(const FixedNState& initial, double t) const;
  FixedNState evolve(const FixedNState& initial, double t) const;
  double energy(const FixedNState& state) const;

 private:
  void require_match(const FixedNState& state) const;

  int total_;
  double g_;
  double kappa_;
  Eigen::MatrixXd h_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXd vectors_;
  Eigen::Matrix<long double, Eigen::Dynamic, 1> energies_ld_;
  Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> vectors_ld_;
};

JosephsonSystem build_hamiltonian(int total_number, double nonlinearity, double coupling = 1.0);

/// Lowest eigenvector, sign fixed so the largest-magnitude amplitude is positive.
FixedNState ground_state(const JosephsonSystem& system);

struct ScanOptions {
  /// Scan covers [0, window_factor * spectral estimate].
  double window_factor = 10.0;
  int samples = 4096;
};

struct PeriodEstimate {
  double spectral = 0.0;  // pi / |E_i - E_j|
  double scanned = 0.0;   // first opposite-sign extremum of <J_z(t)>
  double relative_difference = 0.0;
  int level_low = 0;
  int level_high = 0;
  double splitting = 0.0;
};

/// Smallest level splitting that the long-double eigensolver resolves for
/// this system.
double resolvable_splitting(const JosephsonSystem& system);

/// Time of the first full population transfer. Throws NumericalError when
/// the dominant level splitting is below double resolution or no transfer
/// shows up inside the scan window; ValidationError if the initial state is
/// not concentrated (> 1/2) on one number state.
PeriodEstimate tunnelling_period(const JosephsonSystem& system, const FixedNState& initial,
                                 const ScanOptions& opts = {});

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<std::vector<double>> pm;  // pm[t][m], m the b-mode occupation
  std::vector<double> jz_mean;
  std::vector<double> energy;
  std::vector<int> orders;
  std::vector<std::vector<double>> cn;  // cn[t][k] for orders[k]
  std::optional<PeriodEstimate> period;
};

EvolutionTrace evolve(const JosephsonSystem& system, const FixedNState& initial, std::span<const double> times,
                      std::span<const int> orders = {}, const coherence::SupportOptions& support = {});

/// c_n(t) for each time (rows) and order (columns).
std::vector<std::vector<double>> coherence_trace(const JosephsonSystem& system, const FixedNState& initial,
                                                 std::span<const int> orders, std::span<const double> times,
                                                 const coherence::SupportOptions& support = {});

}  // namespace noon::dynamics
