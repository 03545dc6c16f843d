#include "noon/squeezing.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <string>

#include "noon/coherence.hpp"

namespace noon::squeezing {
namespace {

// Variances from moment differences can land a few ulps below zero.
double clamp_variance(double v) {
  const double slack = 1e-9;
  if (v < -slack) throw ValidationError("negative variance " + std::to_string(v));
  return std::max(v, 0.0);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value))
    throw ValidationError("line " + std::to_string(line_no) + ": '" + std::string(field) +
                          "' is not a finite number");
  return value;
}

InferenceStep step(std::string name, double lhs, double rhs, double margin, bool holds) {
  return {std::move(name), lhs, rhs, margin, holds};
}

}  // namespace

void validate(const SqueezeData& d) {
  for (double v : {d.mean_n, d.jx_mean, d.jy_mean, d.jz_mean, d.jy_var, d.jz_var})
    if (!std::isfinite(v)) throw ValidationError("squeeze data must be finite");
  if (d.mean_n < 0.0) throw ValidationError("mean number must be nonnegative");
  if (d.jy_var < 0.0 || d.jz_var < 0.0) throw ValidationError("variances must be nonnegative");
}

SqueezeData squeeze_data(const fock::SchwingerMoments& m) {
  SqueezeData d;
  d.mean_n = m.ntot;
  d.jx_mean = m.jx;
  d.jy_mean = m.jy;
  d.jz_mean = m.jz;
  d.jy_var = clamp_variance(m.var_y());
  d.jz_var = clamp_variance(m.var_z());
  validate(d);
  return d;
}

SqueezeData squeeze_data(const fock::FixedNState& state) { return squeeze_data(fock::schwinger_moments(state)); }
SqueezeData squeeze_data(const fock::SectorDensityMatrix& rho) { return squeeze_data(fock::schwinger_moments(rho)); }

SqueezeData from_moments(double total, double jx, double jy, double jz, double jy2, double jz2) {
  SqueezeData d;
  d.mean_n = total;
  d.jx_mean = jx;
  d.jy_mean = jy;
  d.jz_mean = jz;
  d.jy_var = clamp_variance(jy2 - jy * jy);
  d.jz_var = clamp_variance(jz2 - jz * jz);
  validate(d);
  return d;
}

std::string_view to_string(XiMode mode) {
  return mode == XiMode::jx_normalized ? "jx_normalized" : "n_normalized";
}

SqueezeParameter squeeze_parameter(const SqueezeData& data, XiMode mode) {
  validate(data);
  const double dy = std::sqrt(data.jy_var);
  if (mode == XiMode::jx_normalized) {
    if (data.jx_mean == 0.0) throw InapplicableError("squeezing test needs a nonzero <J_x>");
    return {dy / std::sqrt(std::abs(data.jx_mean) / 2.0), mode};
  }
  if (data.mean_n == 0.0) throw InapplicableError("squeezing test needs a nonzero <N>");
  return {dy / (std::sqrt(data.mean_n) / 2.0), mode};
}

CoherenceBound coherence_bound(double xi, double total) {
  if (!(xi > 0.0) || !std::isfinite(xi)) throw ValidationError("squeezing parameter must be positive");
  if (!(total >= 0.0) || !std::isfinite(total)) throw ValidationError("total number must be nonnegative");
  return {xi, std::sqrt(total) / xi, xi < 1.0};
}

BoundCheck mixed_state_bound_check(const fock::SchwingerMoments& m, int delta0) {
  if (delta0 < 0) throw ValidationError("spread must be nonnegative");
  BoundCheck c;
  c.delta0 = delta0;
  c.lhs = clamp_variance(m.var_y());
  const double jx2 = m.jx * m.jx;
  if (delta0 == 0) {
    // No coherence at any order; <J_X> must then vanish too.
    c.contradiction = std::abs(m.jx) > kEqualityTolerance;
    c.rhs = c.contradiction ? INFINITY : 0.0;
    c.margin = c.lhs - c.rhs;
    c.holds = !c.contradiction;
    return c;
  }
  c.rhs = jx2 / (static_cast<double>(delta0) * delta0);
  c.margin = c.lhs - c.rhs;
  c.holds = c.margin >= -kEqualityTolerance;
  return c;
}

BoundCheck mixed_state_bound_check(const fock::FixedNState& state, int delta0) {
  return mixed_state_bound_check(fock::schwinger_moments(state), delta0 < 0 ? coherence::spread(state) : delta0);
}
BoundCheck mixed_state_bound_check(const fock::SectorDensityMatrix& rho, int delta0) {
  return mixed_state_bound_check(fock::schwinger_moments(rho), delta0 < 0 ? coherence::spread(rho) : delta0);
}
BoundCheck mixed_state_bound_check(const fock::TwoModeDensityMatrix& rho, int delta0) {
  return mixed_state_bound_check(fock::schwinger_moments(rho), delta0 < 0 ? coherence::spread(rho) : delta0);
}

std::string_view to_string(InferenceStatus status) {
  switch (status) {
    case InferenceStatus::certified: return "certified";
    case InferenceStatus::inconclusive: return "inconclusive";
    case InferenceStatus::precondition_failed: return "precondition_failed";
  }
  return "unknown";
}

InferenceReport infer_two_atom_coherence(const SqueezeData& data, const InferenceOptions& opts) {
  validate(data);
  if (!(opts.mean_tolerance >= 0.0)) throw ValidationError("mean tolerance must be nonnegative");
  InferenceReport rep;
  const double limit = opts.mean_tolerance * std::sqrt(data.mean_n);
  const double ay = std::abs(data.jy_mean);
  const double az = std::abs(data.jz_mean);
  rep.chain.push_back(step("jy_mean_near_zero", ay, limit, limit - ay, ay <= limit));
  rep.chain.push_back(step("jz_mean_near_zero", az, limit, limit - az, az <= limit));
  if (!rep.chain[0].holds || !rep.chain[1].holds) {
    rep.status = InferenceStatus::precondition_failed;
    return rep;
  }

  const double quarter = data.mean_n / 4.0;
  const double jz2 = data.jz_second();
  const double jy2 = data.jy_second();
  rep.chain.push_back(step("jz2_below_quarter_n", jz2, quarter, quarter - jz2, jz2 < quarter));
  rep.chain.push_back(step("jy2_above_quarter_n", jy2, quarter, jy2 - quarter, jy2 > quarter));
  if (!rep.chain[2].holds || !rep.chain[3].holds) {
    rep.status = InferenceStatus::inconclusive;
    return rep;
  }

  // <J_y^2> - <J_z^2> is the imaginary part of <c^dag^2 d^2>, which equals
  // the rotated-mode anticommutator <{J_cx, J_cy}>.
  const double gap = jy2 - jz2;
  rep.chain.push_back(step("rotated_anticommutator_nonzero", gap, 0.0, gap, gap > 0.0));
  rep.chain.push_back(step("rotated_moment_nonzero", gap, 0.0, gap, gap > 0.0));
  rep.rotated_moment_bound = gap;
  rep.status = InferenceStatus::certified;
  return rep;
}

RowAnalysis analyze(const SqueezeData& data, const InferenceOptions& opts) {
  RowAnalysis out;
  out.data = data;
  try {
    out.xi_n = squeeze_parameter(data, XiMode::n_normalized);
    if (out.xi_n->value > 0.0) out.bound = coherence_bound(out.xi_n->value, data.mean_n);
    else out.notes.emplace_back("zero transverse variance; bound undefined");
  } catch (const InapplicableError& e) {
    out.notes.emplace_back(e.what());
  }
  try {
    out.xi_jx = squeeze_parameter(data, XiMode::jx_normalized);
  } catch (const InapplicableError& e) {
    out.notes.emplace_back(e.what());
  }
  out.inference = infer_two_atom_coherence(data, opts);
  return out;
}

std::vector<SqueezeData> read_squeeze_csv(std::istream& in) {
  static const std::vector<std::string_view> kHeader = {"N", "jx", "jy", "jz", "jy2", "jz2"};
  std::vector<SqueezeData> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    const auto fields = split(view);
    if (!header_seen) {
      if (fields != kHeader)
        throw ValidationError("line " + std::to_string(line_no) + ": expected header N,jx,jy,jz,jy2,jz2");
      header_seen = true;
      continue;
    }
    if (fields.size() != kHeader.size())
      throw ValidationError("line " + std::to_string(line_no) + ": expected 6 fields, got " +
                            std::to_string(fields.size()));
    double v[6];
    for (std::size_t i = 0; i < 6; ++i) v[i] = parse_number(fields[i], line_no);
    try {
      rows.push_back(from_moments(v[0], v[1], v[2], v[3], v[4], v[5]));
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!header_seen) throw ValidationError("empty squeezing data file");
  if (rows.empty()) throw ValidationError("squeezing data file has no rows");
  return rows;
}

}  // namespace noon::squeezing
