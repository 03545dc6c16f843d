#include "noon/interferometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "noon/parallel.hpp"

namespace noon::interferometry {
namespace {

constexpr double kPi = std::numbers::pi;

// Sector rotation blocks R_0..R_top at phi = 0, built by applying
// a^dag = (c^dag + d^dag)/sqrt2 and b^dag = (c^dag - d^dag)/sqrt2.
std::vector<Eigen::MatrixXcd> build_blocks(int top) {
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.push_back(Eigen::MatrixXcd::Ones(1, 1));
  const double h = 1.0 / std::sqrt(2.0);
  for (int s = 1; s <= top; ++s) {
    const Eigen::MatrixXcd& prev = blocks.back();
    Eigen::MatrixXcd cur = Eigen::MatrixXcd::Zero(s + 1, s + 1);
    auto raise = [&](int col_in, double sign, double norm, int col_out) {
      for (int j = 0; j < s; ++j) {
        const complex v = prev(j, col_in);
        if (v == 0.0) continue;
        cur(j, col_out) += h * norm * std::sqrt(static_cast<double>(s - j)) * v;
        cur(j + 1, col_out) += sign * h * norm * std::sqrt(static_cast<double>(j + 1)) * v;
      }
    };
    for (int m = 0; m < s; ++m) raise(m, 1.0, 1.0 / std::sqrt(static_cast<double>(s - m)), m);
    raise(s - 1, -1.0, 1.0 / std::sqrt(static_cast<double>(s)), s);
    blocks.push_back(std::move(cur));
  }
  return blocks;
}

const Eigen::MatrixXcd& cached_block(int total) {
  static std::mutex mutex;
  static std::vector<Eigen::MatrixXcd> blocks;
  std::lock_guard<std::mutex> lock(mutex);
  if (static_cast<int>(blocks.size()) <= total) blocks = build_blocks(total);
  return blocks[static_cast<std::size_t>(total)];
}

Eigen::MatrixXcd phased_rotation(int total, double phi, double d_phase) {
  Eigen::MatrixXcd r = cached_block(total);
  for (int j = 0; j <= total; ++j)
    for (int m = 0; m <= total; ++m) r(j, m) *= std::polar(1.0, d_phase * j + phi * m);
  return r;
}

bool is_power_of_two(int k) { return k > 0 && (k & (k - 1)) == 0; }

// Normally ordered single-mode polynomial: (creation power, annihilation power) -> coefficient.
using Poly = std::map<std::pair<int, int>, complex>;

Poly multiply(const Poly& x, const Poly& y) {
  Poly out;
  for (const auto& [kx, cx] : x)
    for (const auto& [ky, cy] : y) {
      const auto [p, r] = kx;
      const auto [pp, rr] = ky;
      // a^r a^dag^pp = sum_k C(r,k) C(pp,k) k! a^dag^(pp-k) a^(r-k)
      for (int k = 0; k <= std::min(r, pp); ++k) {
        const double w = std::exp(fock::log_binomial(r, k) + fock::log_binomial(pp, k) + fock::log_factorial(k));
        out[{p + pp - k, r + rr - k}] += cx * cy * w;
      }
    }
  return out;
}

Poly quadrature(double theta) {
  return {{{0, 1}, std::polar(0.5, -theta)}, {{1, 0}, std::polar(0.5, theta)}};
}
Poly x_quad() { return quadrature(0.0); }
Poly p_quad() { return quadrature(kPi / 2); }
Poly unit() { return {{{0, 0}, 1.0}}; }

complex expect(const MomentOracle& moment, const Poly& fa, const Poly& gb) {
  complex sum = 0.0;
  for (const auto& [ka, ca] : fa)
    for (const auto& [kb, cb] : gb) {
      if (ca == 0.0 || cb == 0.0) continue;
      sum += ca * cb * moment(fock::OperatorMonomial(ka.first, kb.first, ka.second, kb.second));
    }
  return sum;
}

// ---------------------------------------------------------------------------
// Operator matrices for identity validation.

struct OperatorSpace {
  int cutoff;  // checked block
  int padded;  // construction cutoff
  Eigen::MatrixXcd a, b, id;

  OperatorSpace(int c, int pad) : cutoff(c), padded(c + pad) {
    const int side = padded + 1;
    Eigen::MatrixXcd low = Eigen::MatrixXcd::Zero(side, side);
    for (int n = 1; n < side; ++n) low(n - 1, n) = std::sqrt(static_cast<double>(n));
    const Eigen::MatrixXcd one = Eigen::MatrixXcd::Identity(side, side);
    a = kron(low, one);
    b = kron(one, low);
    id = Eigen::MatrixXcd::Identity(side * side, side * side);
  }

  static Eigen::MatrixXcd kron(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
    Eigen::MatrixXcd out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index j = 0; j < x.cols(); ++j) out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    return out;
  }

  double deviation(const Eigen::MatrixXcd& lhs, const Eigen::MatrixXcd& rhs) const {
    const int side = padded + 1;
    double worst = 0.0;
    for (int na = 0; na <= cutoff; ++na)
      for (int nb = 0; nb <= cutoff; ++nb)
        for (int ma = 0; ma <= cutoff; ++ma)
          for (int mb = 0; mb <= cutoff; ++mb) {
            const Eigen::Index i = na * side + nb;
            const Eigen::Index j = ma * side + mb;
            worst = std::max(worst, std::abs(lhs(i, j) - rhs(i, j)));
          }
    return worst;
  }
};

Eigen::MatrixXcd power(const Eigen::MatrixXcd& m, int k) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) out = out * m;
  return out;
}

struct Variants {
  ThirdOrderVariant third;
  FirstQuadratureVariant first;
};

const Variants& selected_variants() {
  static const Variants v = [] {
    const auto checks = validate_identities();
    auto passes = [&](const std::string& name, const std::string& variant) {
      for (const auto& c : checks)
        if (c.name == name && c.variant == variant) return c.holds;
      return false;
    };
    Variants out{};
    if (passes("spin_third_order", "minus")) out.third = ThirdOrderVariant::minus;
    else if (passes("spin_third_order", "plus")) out.third = ThirdOrderVariant::plus;
    else throw NumericalError("no third-order spin identity variant is exact");
    if (passes("quadrature_first_order", "antisymmetric")) out.first = FirstQuadratureVariant::antisymmetric;
    else if (passes("quadrature_first_order", "symmetric")) out.first = FirstQuadratureVariant::symmetric;
    else throw NumericalError("no first-order quadrature identity variant is exact");
    return out;
  }();
  return v;
}

complex third_from_spins(double jx3, double jy3, double j3, double g3, ThirdOrderVariant v) {
  const double r2 = std::sqrt(2.0);
  const double re = v == ThirdOrderVariant::minus ? 2.0 * jx3 - r2 * (j3 - g3) : 2.0 * jx3 - r2 * (j3 + g3);
  const double im = -2.0 * jy3 + r2 * (j3 + g3);
  return {re, im};
}

}  // namespace

// ---------------------------------------------------------------------------

Eigen::MatrixXcd rotation_matrix(int total) {
  if (total < 0) throw ValidationError("total number must be nonnegative");
  return cached_block(total);
}

FixedNState rotate_modes(const FixedNState& state, double phi, double d_phase) {
  const Eigen::VectorXcd out = phased_rotation(state.total_number(), phi, d_phase) * state.vector();
  return FixedNState(state.total_number(), std::vector<complex>(out.data(), out.data() + out.size()));
}

FixedNState unrotate_modes(const FixedNState& state, double phi, double d_phase) {
  const Eigen::VectorXcd out = phased_rotation(state.total_number(), phi, d_phase).adjoint() * state.vector();
  return FixedNState(state.total_number(), std::vector<complex>(out.data(), out.data() + out.size()));
}

SectorDensityMatrix rotate_modes(const SectorDensityMatrix& rho, double phi, double d_phase) {
  std::vector<Eigen::MatrixXcd> blocks;
  for (int s = 0; s <= rho.max_total(); ++s) {
    const Eigen::MatrixXcd r = phased_rotation(s, phi, d_phase);
    Eigen::MatrixXcd b = r * rho.block(s) * r.adjoint();
    // Restore exact hermiticity lost to rounding.
    b = 0.5 * (b + b.adjoint()).eval();
    blocks.push_back(std::move(b));
  }
  return SectorDensityMatrix(std::move(blocks));
}

double intensity_difference(const FixedNState& state, double phi) {
  const complex ab = fock::moment(state, fock::OperatorMonomial::correlation(1));
  return 2.0 * (std::polar(1.0, phi) * ab).real();
}

double visibility(const FixedNState& state) {
  return 2.0 * std::abs(fock::moment(state, fock::OperatorMonomial::correlation(1)));
}

double fringe_visibility(const std::vector<double>& values) {
  if (values.empty()) throw ValidationError("empty fringe");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return 0.5 * (*hi - *lo);
}

std::vector<double> phase_grid(int k) {
  if (k < 1) throw ValidationError("phase grid needs at least one point");
  std::vector<double> out(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) out[static_cast<std::size_t>(i)] = 2.0 * kPi * i / k;
  return out;
}

complex dft_coefficient(const std::vector<double>& values, int omega) {
  const auto k = static_cast<int>(values.size());
  if (k == 0) throw ValidationError("empty sequence");
  complex sum = 0.0;
  for (int i = 0; i < k; ++i) {
    // Reduce the angle exactly in integers before scaling.
    const long long turn = (static_cast<long long>(omega) * i) % k;
    sum += values[static_cast<std::size_t>(i)] * std::polar(1.0, -2.0 * kPi * static_cast<double>(turn) / k);
  }
  return sum / static_cast<double>(k);
}

std::vector<double> dft_magnitudes(const std::vector<double>& values) {
  const auto k = static_cast<int>(values.size());
  std::vector<double> out;
  for (int w = 0; w <= k / 2; ++w) out.push_back(std::abs(dft_coefficient(values, w)));
  return out;
}

int dominant_frequency(const std::vector<double>& spectrum) {
  int best = 0;
  for (int w = 1; w < static_cast<int>(spectrum.size()); ++w)
    if (best == 0 || spectrum[static_cast<std::size_t>(w)] > spectrum[static_cast<std::size_t>(best)]) best = w;
  return best;
}

FringeScan binned_probability_scan(const FixedNState& state, int m, int k) {
  const int n = state.total_number();
  if (m < 0 || m > n) throw ValidationError("bin threshold M must lie in [0, N]");
  if (!is_power_of_two(k)) throw ValidationError("phase grid size must be a power of two");
  if (k <= 2 * n) throw ValidationError("phase grid of " + std::to_string(k) + " points aliases fringes up to N = " +
                                        std::to_string(n) + "; need K > 2N");
  FringeScan scan;
  scan.bin_threshold = m;
  scan.phases = phase_grid(k);
  scan.probabilities = parallel_map<double>(static_cast<std::size_t>(k), [&](std::size_t i) {
    const FixedNState r = rotate_modes(state, scan.phases[i]);
    double p = 0.0;
    for (int j = 0; j <= n - m; ++j) p += r.probability(j);  // n_c = N - j >= M
    return std::clamp(p, 0.0, 1.0);
  });
  scan.spectrum = dft_magnitudes(scan.probabilities);
  scan.peak = dominant_frequency(scan.spectrum);
  return scan;
}

NormalOrderedScan normally_ordered_scan(const FixedNState& state, int n, int k) {
  if (n < 0) throw ValidationError("order must be nonnegative");
  if (k < 1) throw ValidationError("phase grid needs at least one point");
  const int total = state.total_number();
  NormalOrderedScan scan;
  scan.order = n;
  scan.phases = phase_grid(k);
  scan.values = parallel_map<double>(static_cast<std::size_t>(k), [&](std::size_t i) {
    const FixedNState r = rotate_modes(state, scan.phases[i]);
    double v = 0.0;
    for (int j = 0; j <= total - n; ++j) v += r.probability(j) * std::exp(fock::log_falling_factorial(total - j, n));
    return v;
  });
  return scan;
}

complex moment_from_fringes(const NormalOrderedScan& scan) {
  const auto k = static_cast<int>(scan.values.size());
  if (k <= 2 * scan.order)
    throw ValidationError("phase grid of " + std::to_string(k) + " points aliases frequency " +
                          std::to_string(scan.order));
  return std::pow(2.0, scan.order) * dft_coefficient(scan.values, scan.order);
}

// ---------------------------------------------------------------------------

std::vector<IdentityCheck> validate_identities(int cutoff, double tolerance) {
  if (cutoff < 0) throw ValidationError("cutoff must be nonnegative");
  const OperatorSpace sp(cutoff, 6);
  const Eigen::MatrixXcd ad = sp.a.adjoint();
  const Eigen::MatrixXcd bd = sp.b.adjoint();
  const complex i(0.0, 1.0);
  const double r2 = std::sqrt(2.0);

  const Eigen::MatrixXcd jx = 0.5 * (ad * sp.b + bd * sp.a);
  const Eigen::MatrixXcd jy = (ad * sp.b - bd * sp.a) / (2.0 * i);
  auto jtheta = [&](double t) -> Eigen::MatrixXcd { return std::cos(t) * jx + std::sin(t) * jy; };

  const Eigen::MatrixXcd ab1 = ad * sp.b;
  const Eigen::MatrixXcd ab2 = power(ad, 2) * power(sp.b, 2);
  const Eigen::MatrixXcd ab3 = power(ad, 3) * power(sp.b, 3);

  // Quadratures per mode.
  const Eigen::MatrixXcd xa = 0.5 * (sp.a + ad), pa = (sp.a - ad) / (2.0 * i);
  const Eigen::MatrixXcd xb = 0.5 * (sp.b + bd), pb = (sp.b - bd) / (2.0 * i);
  const Eigen::MatrixXcd ra = (xa + pa) / r2, rb = (xb + pb) / r2;

  std::vector<IdentityCheck> out;
  auto record = [&](std::string name, std::string variant, const Eigen::MatrixXcd& lhs, const Eigen::MatrixXcd& rhs) {
    const double dev = sp.deviation(lhs, rhs);
    out.push_back({std::move(name), std::move(variant), dev, dev <= tolerance});
  };

  record("spin_first_order", "", ab1, jx + i * jy);
  record("spin_second_order", "", ab2, jx * jx - jy * jy + i * (jx * jy + jy * jx));
  record("ladder_power", "", power(ab1, 3), ab3);

  const Eigen::MatrixXcd jx3 = power(jx, 3), jy3 = power(jy, 3);
  const Eigen::MatrixXcd j3 = power(jtheta(kPi / 4), 3), g3 = power(jtheta(3 * kPi / 4), 3);
  record("spin_third_order", "plus", ab3, 2.0 * jx3 - r2 * (j3 + g3) - 2.0 * i * jy3 + i * r2 * (j3 + g3));
  record("spin_third_order", "minus", ab3, 2.0 * jx3 - r2 * (j3 - g3) - 2.0 * i * jy3 + i * r2 * (j3 + g3));

  record("quadrature_first_order", "symmetric", ab1, xa * xb + pa * pb - i * (pa * xb + xa * pb));
  record("quadrature_first_order", "antisymmetric", ab1, xa * xb + pa * pb + i * (xa * pb - pa * xb));

  const Eigen::MatrixXcd ua = xa * xa - pa * pa, ub = xb * xb - pb * pb;
  const Eigen::MatrixXcd va = xa * pa + pa * xa, vb = xb * pb + pb * xb;
  record("quadrature_second_order", "", ab2, ua * ub + va * vb - i * va * ub + i * ua * vb);

  record("rotated_quadrature", "mode_a", ra * ra, 0.5 * (xa * xa + pa * pa + va));
  record("rotated_quadrature", "mode_b", rb * rb, 0.5 * (xb * xb + pb * pb + vb));
  return out;
}

ThirdOrderVariant selected_third_order_variant() { return selected_variants().third; }
FirstQuadratureVariant selected_first_quadrature_variant() { return selected_variants().first; }

std::string to_string(ThirdOrderVariant v) { return v == ThirdOrderVariant::minus ? "minus" : "plus"; }
std::string to_string(FirstQuadratureVariant v) {
  return v == FirstQuadratureVariant::antisymmetric ? "antisymmetric" : "symmetric";
}

std::vector<double> third_order_angles() { return {0.0, kPi / 2, kPi / 4, 3 * kPi / 4}; }

complex moment_from_spins(const fock::SchwingerMoments& m, int n) {
  switch (n) {
    case 1: return {m.jx, m.jy};
    case 2: return {m.jx2 - m.jy2, m.jxy_sym};
    case 3: {
      const auto angles = third_order_angles();
      return third_from_spins(m.third_at(angles[0]), m.third_at(angles[1]), m.third_at(angles[2]),
                              m.third_at(angles[3]), selected_third_order_variant());
    }
    default: throw ValidationError("spin route supports orders 1 to 3 only");
  }
}

complex moment_from_spins(const FixedNState& state, int n) {
  if (n < 1 || n > 3) throw ValidationError("spin route supports orders 1 to 3 only");
  const auto angles = third_order_angles();
  return moment_from_spins(fock::schwinger_moments(state, n == 3 ? std::span<const double>(angles) : std::span<const double>()), n);
}

complex moment_from_spins(const SectorDensityMatrix& rho, int n) {
  if (n < 1 || n > 3) throw ValidationError("spin route supports orders 1 to 3 only");
  const auto angles = third_order_angles();
  return moment_from_spins(fock::schwinger_moments(rho, n == 3 ? std::span<const double>(angles) : std::span<const double>()), n);
}

QuadratureMoments quadrature_moments(const MomentOracle& moment) {
  QuadratureMoments q;
  const Poly x = x_quad(), p = p_quad(), r = quadrature(kPi / 4), one = unit();
  q.xx = expect(moment, x, x).real();
  q.pp = expect(moment, p, p).real();
  q.xp = expect(moment, x, p).real();
  q.px = expect(moment, p, x).real();
  const Poly sq[3] = {multiply(x, x), multiply(p, p), multiply(r, r)};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) q.table[i][j] = expect(moment, sq[i], sq[j]).real();
  Poly sym = multiply(x, p);
  for (const auto& [key, c] : multiply(p, x)) sym[key] += c;
  for (int mode = 0; mode < 2; ++mode) {
    auto single = [&](const Poly& f) { return (mode == 0 ? expect(moment, f, one) : expect(moment, one, f)).real(); };
    q.x2[mode] = single(sq[0]);
    q.p2[mode] = single(sq[1]);
    q.r2[mode] = single(sq[2]);
    q.xp_sym[mode] = single(sym);
  }
  return q;
}

QuadratureMoments quadrature_moments(const FixedNState& state) {
  return quadrature_moments([&](const fock::OperatorMonomial& m) { return fock::moment(state, m); });
}

complex moment_from_quadratures(const QuadratureMoments& q, int n) {
  if (n == 1) {
    if (selected_first_quadrature_variant() == FirstQuadratureVariant::antisymmetric)
      return {q.xx + q.pp, q.xp - q.px};
    return {q.xx + q.pp, -(q.px + q.xp)};
  }
  if (n == 2) {
    // Coefficients over (X^2, P^2, R^2): X^2 - P^2 and {X, P} = 2R^2 - X^2 - P^2.
    const double u[3] = {1.0, -1.0, 0.0};
    const double v[3] = {-1.0, -1.0, 2.0};
    auto pair = [&](const double* f, const double* g) {
      double s = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += f[i] * g[j] * q.table[i][j];
      return s;
    };
    return {pair(u, u) + pair(v, v), pair(u, v) - pair(v, u)};
  }
  throw ValidationError("quadrature route supports orders 1 and 2 only");
}

complex moment_from_quadratures(const FixedNState& state, int n) {
  if (n < 1 || n > 2) throw ValidationError("quadrature route supports orders 1 and 2 only");
  return moment_from_quadratures(quadrature_moments(state), n);
}

}  // namespace noon::interferometry
