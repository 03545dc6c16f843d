#include "noon/dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <numbers>
#include <string>

#include "noon/parallel.hpp"

namespace noon::dynamics {
namespace {

double jz_of(const Eigen::VectorXcd& d, int total) {
  double s = 0.0;
  for (int m = 0; m <= total; ++m) s += std::norm(d(m)) * 0.5 * (total - 2 * m);
  return s;
}

}  // namespace

JosephsonSystem::JosephsonSystem(int total_number, double nonlinearity, double coupling)
    : total_(total_number), g_(nonlinearity), kappa_(coupling) {
  if (total_ < 1) throw ValidationError("total number must be at least 1");
  if (!std::isfinite(g_) || !std::isfinite(kappa_)) throw ValidationError("g and kappa must be finite");
  const int dim = total_ + 1;
  h_ = Eigen::MatrixXd::Zero(dim, dim);
  for (int m = 0; m <= total_; ++m) {
    const double na = total_ - m;
    h_(m, m) = 0.5 * g_ * (na * (na - 1.0) + m * (m - 1.0));
    if (m < total_) {
      const double off = kappa_ * std::sqrt((m + 1.0) * (total_ - m));
      h_(m, m + 1) = off;
      h_(m + 1, m) = off;
    }
  }
  using MatLd = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  MatLd h = MatLd::Zero(dim, dim);
  for (int m = 0; m <= total_; ++m) {
    const long double na = total_ - m, mb = m;
    h(m, m) = 0.5L * g_ * (na * (na - 1.0L) + mb * (mb - 1.0L));
    if (m < total_) {
      const long double off = kappa_ * std::sqrt((mb + 1.0L) * na);
      h(m, m + 1) = off;
      h(m + 1, m) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<MatLd> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("Hamiltonian diagonalization failed");
  energies_ld_ = solver.eigenvalues();
  vectors_ld_ = solver.eigenvectors();
  energies_ = energies_ld_.cast<double>();
  vectors_ = vectors_ld_.cast<double>();
}

void JosephsonSystem::require_match(const FixedNState& state) const {
  if (state.total_number() != total_)
    throw ValidationError("state has N = " + std::to_string(state.total_number()) + ", system has N = " +
                          std::to_string(total_));
}

Eigen::VectorXcd JosephsonSystem::evolve_amplitudes(const FixedNState& initial, double t) const {
  require_match(initial);
  using cld = std::complex<long double>;
  using VecLd = Eigen::Matrix<cld, Eigen::Dynamic, 1>;
  const VecLd d0 = initial.vector().cast<cld>();
  const VecLd coeffs = vectors_ld_.transpose().cast<cld>() * d0;
  constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  VecLd phased(coeffs.size());
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    const long double angle = std::fmod(-energies_ld_(i) * static_cast<long double>(t), two_pi);
    phased(i) = std::polar(1.0L, angle) * coeffs(i);
  }
  return (vectors_ld_.cast<cld>() * phased).cast<complex>();
}

FixedNState JosephsonSystem::evolve(const FixedNState& initial, double t) const {
  const Eigen::VectorXcd d = evolve_amplitudes(initial, t);
  return FixedNState(total_, std::vector<complex>(d.data(), d.data() + d.size()));
}

double JosephsonSystem::energy(const FixedNState& state) const {
  require_match(state);
  const Eigen::VectorXcd d = state.vector();
  return d.dot(h_.cast<complex>() * d).real();
}

JosephsonSystem build_hamiltonian(int total_number, double nonlinearity, double coupling) {
  return JosephsonSystem(total_number, nonlinearity, coupling);
}

FixedNState ground_state(const JosephsonSystem& system) {
  Eigen::VectorXd v = system.eigenvectors().col(0);
  Eigen::Index big = 0;
  v.cwiseAbs().maxCoeff(&big);
  if (v(big) < 0.0) v = -v;
  std::vector<complex> d(v.data(), v.data() + v.size());
  return FixedNState(system.total_number(), std::move(d));
}

double resolvable_splitting(const JosephsonSystem& system) {
  const double scale = std::max(1.0, system.eigenvalues().cwiseAbs().maxCoeff());
  return 1e4 * static_cast<double>(std::numeric_limits<long double>::epsilon()) * scale;
}

PeriodEstimate tunnelling_period(const JosephsonSystem& system, const FixedNState& initial, const ScanOptions& opts) {
  if (initial.total_number() != system.total_number())
    throw ValidationError("state and system differ in total number");
  if (!(opts.window_factor > 0.0) || opts.samples < 16)
    throw ValidationError("scan needs a positive window and at least 16 samples");
  const int n = system.total_number();
  double top = 0.0;
  for (int m = 0; m <= n; ++m) top = std::max(top, initial.probability(m));
  if (top <= 0.5 + kEqualityTolerance) throw ValidationError("initial state is not concentrated on one number state");

  // Two eigenstates with the largest overlap with the initial state.
  const Eigen::VectorXcd coeffs = system.eigenvectors().transpose().cast<complex>() * initial.vector();
  std::vector<int> order(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return std::norm(coeffs(x)) > std::norm(coeffs(y)); });
  const Eigen::VectorXd& e = system.eigenvalues();
  const double resolution = resolvable_splitting(system);
  for (int j = 0; j <= n; ++j) {
    if (j == order[0] || std::abs(e(j) - e(order[0])) > resolution) continue;
    // Degenerate to working precision: the solver returns localized states
    // and the tunnelling doublet cannot be identified.
    std::ostringstream msg;
    msg << "levels " << order[0] << " and " << j << " coincide within the eigensolver resolution " << resolution
        << "; tunnelling time not resolvable";
    throw NumericalError(msg.str());
  }
  PeriodEstimate est;
  est.level_low = std::min(order[0], order[1]);
  est.level_high = std::max(order[0], order[1]);
  est.splitting = std::abs(e(est.level_high) - e(est.level_low));
  est.spectral = std::numbers::pi / est.splitting;

  const double window = opts.window_factor * est.spectral;
  const int samples = opts.samples;
  const double dt = window / (samples - 1);
  const std::vector<double> jz = parallel_map<double>(static_cast<std::size_t>(samples), [&](std::size_t k) {
    return jz_of(system.evolve_amplitudes(initial, dt * static_cast<double>(k)), n);
  });

  const double j0 = jz.front();
  if (std::abs(j0) < 1e-12) throw NumericalError("initial <J_z> is zero; no transfer direction");
  const double target = j0 > 0 ? -1.0 : 1.0;
  const double gate = 0.25 * std::abs(j0);
  // First lobe on the opposite side, bounded with hysteresis so small fast
  // wiggles around zero do not split it.
  std::size_t begin = 0;
  while (begin < jz.size() && target * jz[begin] <= gate) ++begin;
  if (begin == jz.size()) throw NumericalError("no population transfer inside the scan window");
  std::size_t end = begin;
  while (end < jz.size() && target * jz[end] >= -gate) ++end;
  std::size_t best = begin;
  for (std::size_t k = begin; k < end; ++k)
    if (target * jz[k] > target * jz[best]) best = k;
  double t_best = dt * static_cast<double>(best);
  if (best > 0 && best + 1 < jz.size()) {
    const double y0 = jz[best - 1], y1 = jz[best], y2 = jz[best + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    if (denom != 0.0) {
      const double shift = 0.5 * (y0 - y2) / denom;
      if (std::abs(shift) <= 1.0) t_best += shift * dt;
    }
  }
  est.scanned = t_best;
  est.relative_difference = std::abs(est.scanned - est.spectral) / est.spectral;
  return est;
}

EvolutionTrace evolve(const JosephsonSystem& system, const FixedNState& initial, std::span<const double> times,
                      std::span<const int> orders, const coherence::SupportOptions& support) {
  if (initial.total_number() != system.total_number())
    throw ValidationError("state and system differ in total number");
  for (double t : times)
    if (!std::isfinite(t)) throw ValidationError("times must be finite");
  for (int n : orders)
    if (n < 1) throw ValidationError("coherence orders must be at least 1");
  const int total = system.total_number();
  EvolutionTrace tr;
  tr.times.assign(times.begin(), times.end());
  tr.orders.assign(orders.begin(), orders.end());
  const std::size_t count = times.size();
  tr.pm.resize(count);
  tr.jz_mean.resize(count);
  tr.energy.resize(count);
  tr.cn.resize(count);
  parallel_for(count, [&](std::size_t k) {
    const Eigen::VectorXcd d = system.evolve_amplitudes(initial, times[k]);
    const double norm2 = d.squaredNorm();
    if (std::abs(norm2 - 1.0) > kEqualityTolerance)
      throw NumericalError("evolution lost normalization at t = " + std::to_string(times[k]));
    std::vector<double> p(static_cast<std::size_t>(total) + 1);
    for (int m = 0; m <= total; ++m) p[static_cast<std::size_t>(m)] = std::norm(d(m));
    tr.pm[k] = std::move(p);
    tr.jz_mean[k] = jz_of(d, total);
    const FixedNState state(total, std::vector<complex>(d.data(), d.data() + d.size()));
    tr.energy[k] = system.energy(state);
    std::vector<double> row;
    for (int n : orders) row.push_back(n <= total ? coherence::catness_fidelity(state, n, support).measurable : 0.0);
    tr.cn[k] = std::move(row);
  });
  return tr;
}

std::vector<std::vector<double>> coherence_trace(const JosephsonSystem& system, const FixedNState& initial,
                                                 std::span<const int> orders, std::span<const double> times,
                                                 const coherence::SupportOptions& support) {
  return evolve(system, initial, times, orders, support).cn;
}

}  // namespace noon::dynamics
