#include "noon/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace noon::fock {
namespace {

constexpr int kTableSize = 4096;

const std::vector<long double>& factorial_table() {
  static const std::vector<long double> table = [] {
    std::vector<long double> t(kTableSize);
    t[0] = 0.0L;
    for (int n = 1; n < kTableSize; ++n) t[n] = t[n - 1] + std::log(static_cast<long double>(n));
    return t;
  }();
  return table;
}

long double log_factorial_ld(int n) {
  if (n < kTableSize) return factorial_table()[static_cast<std::size_t>(n)];
  return std::lgamma(static_cast<long double>(n) + 1.0L);
}

// Half the log of the squared ladder weight for (a^dag)^p a^r acting on |n>:
// sqrt(n!/(n-r)!) * sqrt((n-r+p)!/(n-r)!).
double log_ladder(int n, int p, int r) {
  return 0.5 * (log_falling_factorial(n, r) + log_falling_factorial(n - r + p, p));
}

void require_monomial(const OperatorMonomial& m) {
  if (m.p < 0 || m.q < 0 || m.r < 0 || m.s < 0)
    throw ValidationError("operator exponents must be nonnegative");
}

bool nearly_hermitian(const Eigen::MatrixXcd& m, double tol) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i; j < m.cols(); ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
  return true;
}

void check_diagonal(const Eigen::MatrixXcd& m, const char* what) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    if (m(i, i).real() < -kNormTolerance)
      throw ValidationError(std::string(what) + ": negative population on the diagonal");
}

void check_minors(const Eigen::MatrixXcd& m, const char* what) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double pi = std::max(0.0, m(i, i).real());
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      const double pj = std::max(0.0, m(j, j).real());
      if (std::norm(m(i, j)) > pi * pj + kEqualityTolerance)
        throw ValidationError(std::string(what) + ": coherence exceeds the populations it links");
    }
  }
}

// Expectation values over one number sector, either of a pure vector or of a
// block density matrix.
class SectorExpectation {
 public:
  SectorExpectation(const Eigen::MatrixXcd& state, bool pure) : state_(state), pure_(pure) {}

  const Eigen::MatrixXcd& state() const { return state_; }

  // <O> given O|state> (pure) or O*rho (mixed).
  double value(const Eigen::MatrixXcd& applied) const {
    if (pure_) return state_.col(0).dot(applied.col(0)).real();
    return applied.trace().real();
  }

 private:
  const Eigen::MatrixXcd& state_;
  bool pure_;
};

void accumulate_spin(int total, const SectorExpectation& e, double weight,
                     std::span<const double> angles, SchwingerMoments& out) {
  const SpinBlock blk = spin_block(total);
  const Eigen::MatrixXcd x1 = blk.jx * e.state();
  const Eigen::MatrixXcd y1 = blk.jy * e.state();
  const Eigen::MatrixXcd z1 = blk.jz * e.state();
  out.jx += e.value(x1);
  out.jy += e.value(y1);
  out.jz += e.value(z1);
  out.ntot += total * weight;
  out.jx2 += e.value(blk.jx * x1);
  out.jy2 += e.value(blk.jy * y1);
  out.jz2 += e.value(blk.jz * z1);
  out.jxy_sym += e.value(blk.jx * y1) + e.value(blk.jy * x1);
  for (double theta : angles) {
    const Eigen::SparseMatrix<complex> jt = std::cos(theta) * blk.jx + std::sin(theta) * blk.jy;
    const Eigen::MatrixXcd t1 = jt * e.state();
    const Eigen::MatrixXcd t3 = jt * (jt * t1);
    out.third[theta] += e.value(t3);
  }
}

void seed_angles(std::span<const double> angles, SchwingerMoments& out) {
  for (double theta : angles) out.third.emplace(theta, 0.0);
}

}  // namespace

// ---------------------------------------------------------------------------

double log_factorial(int n) {
  if (n < 0) throw ValidationError("log_factorial of a negative integer");
  return static_cast<double>(log_factorial_ld(n));
}

double log_falling_factorial(int n, int k) {
  if (k < 0 || k > n) throw ValidationError("falling factorial requires 0 <= k <= n");
  return static_cast<double>(log_factorial_ld(n) - log_factorial_ld(n - k));
}

double log_binomial(int n, int k) {
  if (k < 0 || k > n) throw ValidationError("binomial requires 0 <= k <= n");
  return static_cast<double>(log_factorial_ld(n) - log_factorial_ld(k) - log_factorial_ld(n - k));
}

// ---------------------------------------------------------------------------

FixedNState::FixedNState(int total_number, std::vector<complex> amplitudes)
    : total_(total_number), amps_(std::move(amplitudes)) {
  if (total_ < 0) throw ValidationError("total number must be nonnegative");
  if (amps_.size() != static_cast<std::size_t>(total_) + 1)
    throw ValidationError("expected " + std::to_string(total_ + 1) + " amplitudes, got " +
                          std::to_string(amps_.size()));
  double norm2 = 0.0;
  for (const complex& d : amps_) {
    if (!std::isfinite(d.real()) || !std::isfinite(d.imag()))
      throw ValidationError("amplitudes must be finite");
    norm2 += std::norm(d);
  }
  if (!(norm2 > 0.0)) throw ValidationError("amplitude vector has zero norm");
  const double inv = 1.0 / std::sqrt(norm2);
  for (complex& d : amps_) d *= inv;
}

Eigen::VectorXcd FixedNState::vector() const {
  Eigen::VectorXcd v(total_ + 1);
  for (int m = 0; m <= total_; ++m) v(m) = amps_[static_cast<std::size_t>(m)];
  return v;
}

TwoModeDensityMatrix::TwoModeDensityMatrix(int cutoff, Eigen::MatrixXcd entries)
    : cutoff_(cutoff), rho_(std::move(entries)) {
  if (cutoff_ < 0) throw ValidationError("cutoff must be nonnegative");
  const Eigen::Index dim = static_cast<Eigen::Index>(cutoff_ + 1) * (cutoff_ + 1);
  if (rho_.rows() != dim || rho_.cols() != dim)
    throw ValidationError("density matrix must be " + std::to_string(dim) + " x " +
                          std::to_string(dim));
  if (!rho_.allFinite()) throw ValidationError("density matrix has non-finite entries");
  if (!nearly_hermitian(rho_, kNormTolerance)) throw ValidationError("density matrix is not Hermitian");
  if (std::abs(rho_.trace() - 1.0) > kEqualityTolerance)
    throw ValidationError("density matrix trace differs from 1");
  check_diagonal(rho_, "density matrix");
  check_minors(rho_, "density matrix");
}

SectorDensityMatrix::SectorDensityMatrix(std::vector<Eigen::MatrixXcd> blocks)
    : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw ValidationError("sector density matrix needs at least one block");
  complex trace = 0.0;
  for (std::size_t s = 0; s < blocks_.size(); ++s) {
    const Eigen::MatrixXcd& b = blocks_[s];
    const auto dim = static_cast<Eigen::Index>(s + 1);
    if (b.rows() != dim || b.cols() != dim)
      throw ValidationError("sector block " + std::to_string(s) + " has the wrong shape");
    if (!b.allFinite()) throw ValidationError("sector block has non-finite entries");
    if (!nearly_hermitian(b, kNormTolerance)) throw ValidationError("sector block is not Hermitian");
    check_diagonal(b, "sector block");
    check_minors(b, "sector block");
    trace += b.trace();
  }
  if (std::abs(trace - 1.0) > kEqualityTolerance) throw ValidationError("density matrix trace differs from 1");
}

double SectorDensityMatrix::probability(int na, int nb) const {
  if (na < 0 || nb < 0) return 0.0;
  const int s = na + nb;
  if (s > max_total()) return 0.0;
  return blocks_[static_cast<std::size_t>(s)](nb, nb).real();
}

TwoModeDensityMatrix to_density_matrix(const FixedNState& state) {
  const int n = state.total_number();
  const Eigen::Index dim = static_cast<Eigen::Index>(n + 1) * (n + 1);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  for (int m = 0; m <= n; ++m) psi((n - m) * (n + 1) + m) = state.amplitude(m);
  return TwoModeDensityMatrix(n, psi * psi.adjoint());
}

TwoModeDensityMatrix to_density_matrix(const SectorDensityMatrix& rho, int cutoff) {
  if (cutoff < 0) cutoff = rho.max_total();
  const Eigen::Index side = cutoff + 1;
  Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(side * side, side * side);
  double dropped = 0.0;
  for (int s = 0; s <= rho.max_total(); ++s) {
    const Eigen::MatrixXcd& b = rho.block(s);
    for (int m = 0; m <= s; ++m) {
      const bool inside = s - m <= cutoff && m <= cutoff;
      if (!inside) {
        dropped += std::abs(b(m, m).real());
        continue;
      }
      for (int k = 0; k <= s; ++k) {
        if (s - k > cutoff || k > cutoff) continue;
        dense((s - m) * side + m, (s - k) * side + k) = b(m, k);
      }
    }
  }
  if (dropped > kEqualityTolerance)
    throw TruncationError("cutoff " + std::to_string(cutoff) + " discards populated number states");
  return TwoModeDensityMatrix(cutoff, std::move(dense));
}

SectorDensityMatrix to_sectors(const FixedNState& state) {
  const int n = state.total_number();
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(static_cast<std::size_t>(n) + 1);
  for (int s = 0; s < n; ++s) blocks.push_back(Eigen::MatrixXcd::Zero(s + 1, s + 1));
  const Eigen::VectorXcd v = state.vector();
  blocks.push_back(v * v.adjoint());
  return SectorDensityMatrix(std::move(blocks));
}

SectorDensityMatrix to_sectors(const TwoModeDensityMatrix& rho) {
  const int c = rho.cutoff();
  std::vector<Eigen::MatrixXcd> blocks;
  for (int s = 0; s <= 2 * c; ++s) {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(s + 1, s + 1);
    const int lo = std::max(0, s - c);
    const int hi = std::min(s, c);
    for (int m = lo; m <= hi; ++m)
      for (int k = lo; k <= hi; ++k) b(m, k) = rho.element(s - m, m, s - k, k);
    blocks.push_back(std::move(b));
  }
  while (blocks.size() > 1 && blocks.back().isZero(0.0)) blocks.pop_back();
  return SectorDensityMatrix(std::move(blocks));
}

// ---------------------------------------------------------------------------

OperatorMonomial::OperatorMonomial(int p_, int q_, int r_, int s_) : p(p_), q(q_), r(r_), s(s_) {
  require_monomial(*this);
}

complex moment_scaled(const FixedNState& state, const OperatorMonomial& mono, double log_scale) {
  require_monomial(mono);
  if (!mono.conserves_number()) return 0.0;
  const int n = state.total_number();
  complex sum = 0.0;
  for (int m = mono.s; m <= n - mono.r; ++m) {
    const int na = n - m;
    const int out = m - mono.s + mono.q;
    const complex pair = std::conj(state.amplitude(out)) * state.amplitude(m);
    if (pair == 0.0) continue;
    const double lw = log_ladder(na, mono.p, mono.r) + log_ladder(m, mono.q, mono.s);
    sum += pair * std::exp(lw - log_scale);
  }
  return sum;
}

complex moment(const FixedNState& state, const OperatorMonomial& mono) {
  return moment_scaled(state, mono, 0.0);
}

complex moment_scaled(const SectorDensityMatrix& rho, const OperatorMonomial& mono, double log_scale) {
  require_monomial(mono);
  if (!mono.conserves_number()) return 0.0;
  complex sum = 0.0;
  for (int s = 0; s <= rho.max_total(); ++s) {
    const Eigen::MatrixXcd& b = rho.block(s);
    for (int m = mono.s; m <= s - mono.r; ++m) {
      const int out = m - mono.s + mono.q;
      const complex value = b(m, out);
      if (value == 0.0) continue;
      const double lw = log_ladder(s - m, mono.p, mono.r) + log_ladder(m, mono.q, mono.s);
      sum += value * std::exp(lw - log_scale);
    }
  }
  return sum;
}

complex moment(const SectorDensityMatrix& rho, const OperatorMonomial& mono) {
  return moment_scaled(rho, mono, 0.0);
}

complex moment(const TwoModeDensityMatrix& rho, const OperatorMonomial& mono) {
  require_monomial(mono);
  const int c = rho.cutoff();
  if (std::max({mono.p, mono.q, mono.r, mono.s}) > c)
    throw TruncationError("monomial exponent exceeds the cutoff " + std::to_string(c));
  complex sum = 0.0;
  for (int na = mono.r; na <= c; ++na) {
    const int na_out = na - mono.r + mono.p;
    if (na_out > c) continue;
    for (int nb = mono.s; nb <= c; ++nb) {
      const int nb_out = nb - mono.s + mono.q;
      if (nb_out > c) continue;
      const complex value = rho.element(na, nb, na_out, nb_out);
      if (value == 0.0) continue;
      sum += value * std::exp(log_ladder(na, mono.p, mono.r) + log_ladder(nb, mono.q, mono.s));
    }
  }
  return sum;
}

// ---------------------------------------------------------------------------

std::vector<OrderElement> order_elements(const FixedNState& state, int n) {
  std::vector<OrderElement> out;
  const int total = state.total_number();
  for (int mp = 0; mp + n <= total; ++mp) {
    OrderElement e;
    e.lower_b = mp;
    e.lower_a = total - n - mp;
    e.value = state.amplitude(mp + n) * std::conj(state.amplitude(mp));
    e.p_left = state.probability(mp + n);
    e.p_right = state.probability(mp);
    out.push_back(e);
  }
  return out;
}

std::vector<OrderElement> order_elements(const SectorDensityMatrix& rho, int n) {
  std::vector<OrderElement> out;
  for (int s = n; s <= rho.max_total(); ++s) {
    const Eigen::MatrixXcd& b = rho.block(s);
    for (int mp = 0; mp + n <= s; ++mp) {
      OrderElement e;
      e.lower_b = mp;
      e.lower_a = s - n - mp;
      e.value = b(mp + n, mp);
      e.p_left = b(mp + n, mp + n).real();
      e.p_right = b(mp, mp).real();
      out.push_back(e);
    }
  }
  return out;
}

std::vector<OrderElement> order_elements(const TwoModeDensityMatrix& rho, int n) {
  std::vector<OrderElement> out;
  const int c = rho.cutoff();
  for (int np = 0; np + n <= c; ++np) {
    for (int mp = 0; mp + n <= c; ++mp) {
      OrderElement e;
      e.lower_a = np;
      e.lower_b = mp;
      e.value = rho.element(np, mp + n, np + n, mp);
      e.p_left = rho.probability(np, mp + n);
      e.p_right = rho.probability(np + n, mp);
      out.push_back(e);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

SpinBlock spin_block(int total) {
  using Triplet = Eigen::Triplet<complex>;
  const int dim = total + 1;
  std::vector<Triplet> x, y, z;
  for (int m = 0; m <= total; ++m) {
    z.emplace_back(m, m, 0.5 * (total - 2 * m));
    if (m == 0) continue;
    // a^dag b |total-m, m> = sqrt((total-m+1) m) |total-m+1, m-1>
    const double w = std::sqrt(static_cast<double>(total - m + 1) * m);
    x.emplace_back(m - 1, m, 0.5 * w);
    x.emplace_back(m, m - 1, 0.5 * w);
    y.emplace_back(m - 1, m, complex(0.0, -0.5 * w));
    y.emplace_back(m, m - 1, complex(0.0, 0.5 * w));
  }
  SpinBlock blk;
  blk.jx.resize(dim, dim);
  blk.jy.resize(dim, dim);
  blk.jz.resize(dim, dim);
  blk.jx.setFromTriplets(x.begin(), x.end());
  blk.jy.setFromTriplets(y.begin(), y.end());
  blk.jz.setFromTriplets(z.begin(), z.end());
  return blk;
}

double SchwingerMoments::second_at(double theta) const {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return c * c * jx2 + s * s * jy2 + c * s * jxy_sym;
}

double SchwingerMoments::third_at(double theta) const {
  for (const auto& [angle, value] : third)
    if (std::abs(angle - theta) < 1e-12) return value;
  throw ValidationError("third moment not computed at the requested angle");
}

SchwingerMoments schwinger_moments(const FixedNState& state, std::span<const double> angles) {
  SchwingerMoments out;
  seed_angles(angles, out);
  const Eigen::MatrixXcd psi = state.vector();
  accumulate_spin(state.total_number(), SectorExpectation(psi, true), 1.0, angles, out);
  return out;
}

SchwingerMoments schwinger_moments(const SectorDensityMatrix& rho, std::span<const double> angles) {
  SchwingerMoments out;
  seed_angles(angles, out);
  for (int s = 0; s <= rho.max_total(); ++s) {
    const Eigen::MatrixXcd& b = rho.block(s);
    const double weight = b.trace().real();
    if (b.isZero(0.0)) continue;
    accumulate_spin(s, SectorExpectation(b, false), weight, angles, out);
  }
  return out;
}

SchwingerMoments schwinger_moments(const TwoModeDensityMatrix& rho, std::span<const double> angles) {
  return schwinger_moments(to_sectors(rho), angles);
}

// ---------------------------------------------------------------------------

std::map<int, double> number_distribution(const FixedNState& state) {
  std::map<int, double> out;
  const int n = state.total_number();
  for (int m = 0; m <= n; ++m) {
    const double p = state.probability(m);
    if (p > 0.0) out[n - 2 * m] += p;
  }
  return out;
}

std::map<int, double> number_distribution(const SectorDensityMatrix& rho) {
  std::map<int, double> out;
  for (int s = 0; s <= rho.max_total(); ++s) {
    const Eigen::MatrixXcd& b = rho.block(s);
    for (int m = 0; m <= s; ++m) {
      const double p = b(m, m).real();
      if (p > 0.0) out[s - 2 * m] += p;
    }
  }
  return out;
}

std::map<int, double> number_distribution(const TwoModeDensityMatrix& rho) {
  std::map<int, double> out;
  const int c = rho.cutoff();
  for (int na = 0; na <= c; ++na)
    for (int nb = 0; nb <= c; ++nb) {
      const double p = rho.probability(na, nb);
      if (p > 0.0) out[na - nb] += p;
    }
  return out;
}

}  // namespace noon::fock
