#pragma once

// Spin-squeezing parameter, the squeezing bound on coherence size, the
// spread-limited variance check for mixtures, and the two-atom inference
// from number squeezing with enhanced conjugate noise.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "noon/fock.hpp"

namespace noon::squeezing {

struct SqueezeData {
  double mean_n = 0.0;
  double jx_mean = 0.0;
  double jy_mean = 0.0;
  double jz_mean = 0.0;
  double jy_var = 0.0;
  double jz_var = 0.0;

  double jy_second() const { return jy_var + jy_mean * jy_mean; }
  double jz_second() const { return jz_var + jz_mean * jz_mean; }
};

/// Finite entries, mean_n >= 0, variances >= 0 (tiny negative round-off is
/// clamped by the constructors below, not here).
void validate(const SqueezeData& data);

SqueezeData squeeze_data(const fock::SchwingerMoments& moments);
SqueezeData squeeze_data(const fock::FixedNState& state);
SqueezeData squeeze_data(const fock::SectorDensityMatrix& rho);

/// From raw means and second moments, one row of the ingestion CSV.
SqueezeData from_moments(double total, double jx, double jy, double jz, double jy2, double jz2);

enum class XiMode { jx_normalized, n_normalized };
std::string_view to_string(XiMode mode);

/// The squeezing test has no meaning for this input (zero denominator).
class InapplicableError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct SqueezeParameter {
  double value = 0.0;
  XiMode mode = XiMode::n_normalized;
};

/// jx mode: dJ_y / sqrt(|<J_x>|/2). n mode: dJ_y / (sqrt(<N>)/2).
SqueezeParameter squeeze_parameter(const SqueezeData& data, XiMode mode);

struct CoherenceBound {
  double xi = 0.0;
  double min_order = 0.0;  // sqrt(N)/xi
  bool certified = false;  // xi < 1
};

CoherenceBound coherence_bound(double xi, double total);

struct BoundCheck {
  bool holds = false;
  bool contradiction = false;  // delta0 = 0 with nonzero <J_X>
  int delta0 = 0;
  double lhs = 0.0;     // (dJ_Y)^2
  double rhs = 0.0;     // |<J_X>|^2 / delta0^2
  double margin = 0.0;  // lhs - rhs
};

/// (dJ_Y)^2 >= |<J_X>|^2 / delta0^2.
BoundCheck mixed_state_bound_check(const fock::SchwingerMoments& moments, int delta0);
/// delta0 < 0 takes the spread of the state's coherence spectrum.
BoundCheck mixed_state_bound_check(const fock::FixedNState& state, int delta0 = -1);
BoundCheck mixed_state_bound_check(const fock::SectorDensityMatrix& rho, int delta0 = -1);
BoundCheck mixed_state_bound_check(const fock::TwoModeDensityMatrix& rho, int delta0 = -1);

struct InferenceStep {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool holds = false;
};

enum class InferenceStatus { certified, inconclusive, precondition_failed };
std::string_view to_string(InferenceStatus status);

struct InferenceOptions {
  /// First moments count as zero when |<J>| <= mean_tolerance * sqrt(<N>).
  double mean_tolerance = 0.05;
};

/// Chain: near-zero <J_y>, <J_z>; then <J_z^2> < N/4 < <J_y^2>; then
/// Im<c^dag^2 d^2> = <J_y^2> - <J_z^2> != 0 for c = (a+b)/sqrt2,
/// d = e^{-i pi/4}(a-b)/sqrt2, certifying a two-quantum coherence in (c, d).
struct InferenceReport {
  InferenceStatus status = InferenceStatus::inconclusive;
  std::vector<InferenceStep> chain;
  /// Lower bound on |<c^dag^2 d^2>| when certified, else 0.
  double rotated_moment_bound = 0.0;
};

InferenceReport infer_two_atom_coherence(const SqueezeData& data, const InferenceOptions& opts = {});

/// Everything the infer command reports for one data row.
struct RowAnalysis {
  SqueezeData data;
  std::optional<SqueezeParameter> xi_n;
  std::optional<SqueezeParameter> xi_jx;
  std::optional<CoherenceBound> bound;  // from the n-normalized parameter
  InferenceReport inference;
  std::vector<std::string> notes;
};

RowAnalysis analyze(const SqueezeData& data, const InferenceOptions& opts = {});

/// CSV with header N,jx,jy,jz,jy2,jz2 (second moments, not variances).
/// Throws ValidationError naming the offending line.
std::vector<SqueezeData> read_squeeze_csv(std::istream& in);

}  // namespace noon::squeezing
