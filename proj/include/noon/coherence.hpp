#pragma once

// Coherence spectrum, catness fidelity C_n, the moment-based bound c_n with
// its factor S and normalization, and the truncation-corrected bound.

#include <optional>
#include <string>
#include <vector>

#include "noon/fock.hpp"

namespace noon::coherence {

using fock::FixedNState;
using fock::SectorDensityMatrix;
using fock::TwoModeDensityMatrix;

/// magnitude = 2 |<n', m'+n| rho |n'+n, m'>|.
struct CoherenceElement {
  int order = 0;
  int left_index = 0;   // n'
  int right_index = 0;  // m'
  int offset = 0;       // n' - m'
  double magnitude = 0.0;
};

std::vector<CoherenceElement> coherence_spectrum(const FixedNState& state, int n);
std::vector<CoherenceElement> coherence_spectrum(const SectorDensityMatrix& rho, int n);
/// Requires 1 <= n <= 2 * cutoff.
std::vector<CoherenceElement> coherence_spectrum(const TwoModeDensityMatrix& rho, int n);

/// 1 / max sum_m |d_m d_{m+n}| over unit vectors of length N+1; equal to
/// 1/cos(pi/(floor(N/n)+2)) and exactly 2 whenever 2n > N.
double normalization(int total, int n);

/// Options shared by the S factor and the bound.
struct SupportOptions {
  /// A number state counts as populated when its probability exceeds this.
  /// Zero keeps every state with nonzero probability.
  double threshold = kDefaultSupportThreshold;
};

/// Supremum of sqrt((m'+n)!/m'!) sqrt((n'+n)!/n'!) over pairs whose two
/// linked populations are both supported.
struct SFactor {
  double value = 0.0;
  double log_value = 0.0;
  /// Maximizing (n', m') pairs, ties included, ordered by m'.
  std::vector<std::pair<int, int>> argmax;
};

/// Throws ValidationError on empty support.
SFactor s_factor(const FixedNState& state, int n, const SupportOptions& opts = {});
SFactor s_factor(const SectorDensityMatrix& rho, int n, const SupportOptions& opts = {});
SFactor s_factor(const TwoModeDensityMatrix& rho, int n, const SupportOptions& opts = {});

/// B_m^{(N,n)} = sqrt((m+n)!/m!) sqrt((N-m)!/(N-m-n)!) for m = 0..N-n.
std::vector<double> b_factors(int total, int n);

struct Fidelity {
  std::optional<double> total;  // C_n
  double measurable = 0.0;      // c_n
};

/// C_n = norm * sum |rho element| and c_n = norm * |<a^dag^n b^n>| / S, with
/// norm = normalization(N_max, n) for the largest supported total N_max.
/// c_n = 0 when n exceeds N_max or no pair is supported.
Fidelity catness_fidelity(const FixedNState& state, int n, const SupportOptions& opts = {});
Fidelity catness_fidelity(const SectorDensityMatrix& rho, int n, const SupportOptions& opts = {});
Fidelity catness_fidelity(const TwoModeDensityMatrix& rho, int n, const SupportOptions& opts = {});

/// max(0, (|moment| - (eps/2)(N_up + n)^n) / S).
double corrected_lower_bound(complex measured_moment, double eps, int n_up, int n, double s);

struct OrderReport {
  int order = 0;
  std::vector<CoherenceElement> elements;
  std::optional<double> total;       // C_n
  double measurable = 0.0;           // c_n
  std::optional<double> norm;        // absent when n > N_max
  std::optional<double> s;           // absent without a supported pair
  std::vector<std::pair<int, int>> s_argmax;
  std::vector<double> b_factors;     // fixed-N inputs only
  complex moment;                    // <a^dag^n b^n>
};

struct CoherenceReport {
  std::vector<OrderReport> orders;
  int spread = 0;         // largest order carrying any coherence element
  int max_total = 0;      // N_max
  double support_threshold = kDefaultSupportThreshold;
  std::string support_rule = "joint_pair";
};

struct ReportOptions {
  SupportOptions support;
  bool include_elements = true;
};

/// Orders 1..N_max when `orders` is empty.
CoherenceReport coherence_report(const FixedNState& state, std::vector<int> orders = {},
                                 const ReportOptions& opts = {});
CoherenceReport coherence_report(const SectorDensityMatrix& rho, std::vector<int> orders = {},
                                 const ReportOptions& opts = {});
CoherenceReport coherence_report(const TwoModeDensityMatrix& rho, std::vector<int> orders = {},
                                 const ReportOptions& opts = {});

/// Largest order with a coherence element above the floor.
int spread(const FixedNState& state);
int spread(const SectorDensityMatrix& rho);
int spread(const TwoModeDensityMatrix& rho);

}  // namespace noon::coherence
