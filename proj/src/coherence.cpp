#include "noon/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace noon::coherence {
namespace {

using fock::OrderElement;

void require_order(int n) {
  if (n < 1) throw ValidationError("coherence order must be at least 1");
}

bool supported(double p, double threshold) { return p > threshold; }

double log_weight(const OrderElement& e, int n) {
  return 0.5 * (fock::log_falling_factorial(e.lower_b + n, n) +
                fock::log_falling_factorial(e.lower_a + n, n));
}

std::vector<CoherenceElement> spectrum_from(const std::vector<OrderElement>& els, int n) {
  std::vector<CoherenceElement> out;
  for (const OrderElement& e : els) {
    const double mag = 2.0 * std::abs(e.value);
    if (mag <= kCoherenceFloor) continue;
    out.push_back({n, e.lower_a, e.lower_b, e.lower_a - e.lower_b, mag});
  }
  return out;
}

std::optional<SFactor> s_from(const std::vector<OrderElement>& els, int n, double threshold) {
  std::optional<SFactor> best;
  for (const OrderElement& e : els) {
    if (!supported(e.p_left, threshold) || !supported(e.p_right, threshold)) continue;
    const double lw = log_weight(e, n);
    const double tol = best ? 1e-12 * std::max(1.0, std::abs(best->log_value)) : 0.0;
    if (!best || lw > best->log_value + tol) {
      best = SFactor{};
      best->log_value = lw;
      best->argmax.emplace_back(e.lower_a, e.lower_b);
    } else if (std::abs(lw - best->log_value) <= tol) {
      best->argmax.emplace_back(e.lower_a, e.lower_b);
    }
  }
  if (best) {
    best->value = std::exp(best->log_value);
    std::sort(best->argmax.begin(), best->argmax.end(),
              [](const auto& x, const auto& y) {
      return x.second != y.second ? x.second < y.second : x.first < y.first;
    });
  }
  return best;
}

int max_supported_total(const FixedNState& state, double) { return state.total_number(); }

int max_supported_total(const SectorDensityMatrix& rho, double threshold) {
  for (int s = rho.max_total(); s > 0; --s)
    for (int m = 0; m <= s; ++m)
      if (supported(rho.block(s)(m, m).real(), threshold)) return s;
  return 0;
}

int max_supported_total(const TwoModeDensityMatrix& rho, double threshold) {
  int best = 0;
  for (int na = 0; na <= rho.cutoff(); ++na)
    for (int nb = 0; nb <= rho.cutoff(); ++nb)
      if (supported(rho.probability(na, nb), threshold)) best = std::max(best, na + nb);
  return best;
}

struct OrderData {
  Fidelity fidelity;
  std::optional<double> norm;
  std::optional<SFactor> s;
  complex moment;
};

OrderData evaluate(const std::vector<OrderElement>& els, int n, int nmax, double threshold) {
  OrderData d;
  d.fidelity.total = 0.0;
  for (const OrderElement& e : els) d.moment += e.value * std::exp(log_weight(e, n));
  if (n > nmax) return d;
  d.norm = normalization(nmax, n);
  double sum = 0.0;
  for (const OrderElement& e : els) sum += std::abs(e.value);
  d.fidelity.total = *d.norm * sum;
  d.s = s_from(els, n, threshold);
  if (!d.s) return d;
  complex scaled = 0.0;
  for (const OrderElement& e : els) scaled += e.value * std::exp(log_weight(e, n) - d.s->log_value);
  d.fidelity.measurable = *d.norm * std::abs(scaled);
  return d;
}

template <typename Source>
Fidelity fidelity_impl(const Source& src, int n, const SupportOptions& opts) {
  require_order(n);
  const int nmax = max_supported_total(src, opts.threshold);
  return evaluate(fock::order_elements(src, n), n, nmax, opts.threshold).fidelity;
}

template <typename Source>
SFactor s_impl(const Source& src, int n, const SupportOptions& opts) {
  require_order(n);
  auto s = s_from(fock::order_elements(src, n), n, opts.threshold);
  if (!s) throw ValidationError("no supported pair at order " + std::to_string(n));
  return *s;
}

template <typename Source>
int spread_impl(const Source& src, int top) {
  for (int n = top; n >= 1; --n)
    if (!spectrum_from(fock::order_elements(src, n), n).empty()) return n;
  return 0;
}

template <typename Source>
CoherenceReport report_impl(const Source& src, std::vector<int> orders, const ReportOptions& opts,
                            int top, bool fixed_n) {
  CoherenceReport rep;
  rep.support_threshold = opts.support.threshold;
  rep.max_total = max_supported_total(src, opts.support.threshold);
  rep.spread = spread_impl(src, top);
  if (orders.empty())
    for (int n = 1; n <= std::max(rep.max_total, 1); ++n) orders.push_back(n);
  for (int n : orders) {
    require_order(n);
    const auto els = fock::order_elements(src, n);
    const OrderData d = evaluate(els, n, rep.max_total, opts.support.threshold);
    OrderReport o;
    o.order = n;
    if (opts.include_elements) o.elements = spectrum_from(els, n);
    o.total = d.fidelity.total;
    o.measurable = d.fidelity.measurable;
    o.norm = d.norm;
    if (d.s) {
      o.s = d.s->value;
      o.s_argmax = d.s->argmax;
    }
    if (fixed_n && n <= rep.max_total) o.b_factors = b_factors(rep.max_total, n);
    o.moment = d.moment;
    rep.orders.push_back(std::move(o));
  }
  return rep;
}

}  // namespace

std::vector<CoherenceElement> coherence_spectrum(const FixedNState& state, int n) {
  require_order(n);
  return spectrum_from(fock::order_elements(state, n), n);
}

std::vector<CoherenceElement> coherence_spectrum(const SectorDensityMatrix& rho, int n) {
  require_order(n);
  return spectrum_from(fock::order_elements(rho, n), n);
}

std::vector<CoherenceElement> coherence_spectrum(const TwoModeDensityMatrix& rho, int n) {
  require_order(n);
  if (n > 2 * rho.cutoff()) throw ValidationError("order exceeds twice the cutoff");
  return spectrum_from(fock::order_elements(rho, n), n);
}

double normalization(int total, int n) {
  if (n < 1 || n > total) throw ValidationError("normalization needs 1 <= n <= N");
  if (2 * n > total) return 2.0;
  return 1.0 / std::cos(std::numbers::pi / (total / n + 2));
}

SFactor s_factor(const FixedNState& state, int n, const SupportOptions& opts) { return s_impl(state, n, opts); }
SFactor s_factor(const SectorDensityMatrix& rho, int n, const SupportOptions& opts) { return s_impl(rho, n, opts); }
SFactor s_factor(const TwoModeDensityMatrix& rho, int n, const SupportOptions& opts) { return s_impl(rho, n, opts); }

std::vector<double> b_factors(int total, int n) {
  if (n < 1 || n > total) throw ValidationError("B factors need 1 <= n <= N");
  std::vector<double> out;
  for (int m = 0; m + n <= total; ++m)
    out.push_back(std::exp(0.5 * (fock::log_falling_factorial(m + n, n) +
                                  fock::log_falling_factorial(total - m, n))));
  return out;
}

Fidelity catness_fidelity(const FixedNState& state, int n, const SupportOptions& opts) {
  return fidelity_impl(state, n, opts);
}
Fidelity catness_fidelity(const SectorDensityMatrix& rho, int n, const SupportOptions& opts) {
  return fidelity_impl(rho, n, opts);
}
Fidelity catness_fidelity(const TwoModeDensityMatrix& rho, int n, const SupportOptions& opts) {
  return fidelity_impl(rho, n, opts);
}

double corrected_lower_bound(complex measured_moment, double eps, int n_up, int n, double s) {
  if (eps < 0.0) throw ValidationError("epsilon must be nonnegative");
  if (n_up < 0) throw ValidationError("upper mode bound must be nonnegative");
  if (n < 1) throw ValidationError("order must be at least 1");
  if (!(s > 0.0)) throw ValidationError("S must be positive");
  const double correction = 0.5 * eps * std::pow(static_cast<double>(n_up + n), n);
  return std::max(0.0, (std::abs(measured_moment) - correction) / s);
}

CoherenceReport coherence_report(const FixedNState& state, std::vector<int> orders, const ReportOptions& opts) {
  return report_impl(state, std::move(orders), opts, state.total_number(), true);
}
CoherenceReport coherence_report(const SectorDensityMatrix& rho, std::vector<int> orders, const ReportOptions& opts) {
  return report_impl(rho, std::move(orders), opts, rho.max_total(), false);
}
CoherenceReport coherence_report(const TwoModeDensityMatrix& rho, std::vector<int> orders, const ReportOptions& opts) {
  return report_impl(rho, std::move(orders), opts, rho.cutoff(), false);
}

int spread(const FixedNState& state) { return spread_impl(state, state.total_number()); }
int spread(const SectorDensityMatrix& rho) { return spread_impl(rho, rho.max_total()); }
int spread(const TwoModeDensityMatrix& rho) { return spread_impl(rho, rho.cutoff()); }

}  // namespace noon::coherence
