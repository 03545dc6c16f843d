#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace oracle {

Eigen::MatrixXcd annihilation(int cutoff) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

TwoModeOps two_mode_ops(int cutoff) {
  const Eigen::MatrixXcd single = annihilation(cutoff);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(cutoff + 1, cutoff + 1);
  const int dim = (cutoff + 1) * (cutoff + 1);
  TwoModeOps ops{Eigen::MatrixXcd::Zero(dim, dim), Eigen::MatrixXcd::Zero(dim, dim)};
  for (int i = 0; i <= cutoff; ++i)
    for (int j = 0; j <= cutoff; ++j)
      for (int k = 0; k <= cutoff; ++k)
        for (int l = 0; l <= cutoff; ++l) {
          ops.a(i * (cutoff + 1) + k, j * (cutoff + 1) + l) = single(i, j) * id(k, l);
          ops.b(i * (cutoff + 1) + k, j * (cutoff + 1) + l) = id(i, j) * single(k, l);
        }
  return ops;
}

Eigen::MatrixXcd embed(const noon::fock::FixedNState& state, int cutoff) {
  const int dim = (cutoff + 1) * (cutoff + 1);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  const int n = state.total_number();
  for (int m = 0; m <= n; ++m) psi((n - m) * (cutoff + 1) + m) = state.amplitude(m);
  return psi * psi.adjoint();
}

namespace {

Eigen::MatrixXcd power(const Eigen::MatrixXcd& m, int k) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) out = out * m;
  return out;
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

Eigen::MatrixXcd kraus(int cutoff, int k, double eta) {
  Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
  for (int n = k; n <= cutoff; ++n)
    e(n - k, n) = std::sqrt(binomial(n, k) * std::pow(eta, n - k) * std::pow(1.0 - eta, k));
  return e;
}

}  // namespace

complex moment(const Eigen::MatrixXcd& rho, int cutoff, int p, int q, int r, int s) {
  const TwoModeOps ops = two_mode_ops(cutoff);
  const Eigen::MatrixXcd op =
      power(ops.a.adjoint(), p) * power(ops.b.adjoint(), q) * power(ops.a, r) * power(ops.b, s);
  return (rho * op).trace();
}

Eigen::MatrixXcd loss(const Eigen::MatrixXcd& rho, int cutoff, double eta_a, double eta_b) {
  const int d = cutoff + 1;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  for (int k = 0; k <= cutoff; ++k) {
    const Eigen::MatrixXcd ea = kraus(cutoff, k, eta_a);
    for (int l = 0; l <= cutoff; ++l) {
      const Eigen::MatrixXcd eb = kraus(cutoff, l, eta_b);
      Eigen::MatrixXcd op(d * d, d * d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) op.block(i * d, j * d, d, d) = ea(i, j) * eb;
      out += op * rho * op.adjoint();
    }
  }
  return out;
}

double normalization(int total, int n, int restarts) {
  const std::size_t len = static_cast<std::size_t>(total) + 1, shift = static_cast<std::size_t>(n);
  auto unit = [](std::vector<double>& v) {
    double norm = 0.0;
    for (double e : v) norm += e * e;
    norm = std::sqrt(norm);
    for (double& e : v) e /= norm;
  };
  double best = 0.0;
  std::vector<double> x(len), next(len);
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(r));
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (double& e : x) e = uni(rng);
    unit(x);
    double value = 0.0;
    for (int it = 0; it < 200000; ++it) {
      // Gradient of sum x_m x_{m+n} is x_{m+n} + x_{m-n}; step 1, project, renormalize.
      for (std::size_t m = 0; m < len; ++m) {
        double g = 0.0;
        if (m + shift < len) g += x[m + shift];
        if (m >= shift) g += x[m - shift];
        next[m] = std::max(0.0, x[m] + g);
      }
      unit(next);
      double v = 0.0;
      for (std::size_t m = 0; m + shift < len; ++m) v += next[m] * next[m + shift];
      x.swap(next);
      const bool settled = std::abs(v - value) < 1e-14;
      value = v;
      if (settled && it > 50) break;
    }
    best = std::max(best, value);
  }
  return 1.0 / best;
}

int max_total(const Eigen::MatrixXcd& rho, int cutoff, double threshold) {
  int top = 0;
  for (int na = 0; na <= cutoff; ++na)
    for (int nb = 0; nb <= cutoff; ++nb) {
      const int i = na * (cutoff + 1) + nb;
      if (rho(i, i).real() > threshold) top = std::max(top, na + nb);
    }
  return top;
}

Catness catness(const Eigen::MatrixXcd& rho, int cutoff, int n, double threshold) {
  Catness out;
  const int top = max_total(rho, cutoff, threshold);
  if (n > top) return out;
  const double norm = top < 2 * n ? 2.0 : 1.0 / std::cos(M_PI / (top / n + 2));
  auto idx = [&](int na, int nb) { return na * (cutoff + 1) + nb; };
  double sum = 0.0;
  for (int np = 0; np + n <= cutoff; ++np)
    for (int mp = 0; mp + n <= cutoff; ++mp) {
      const int left = idx(np, mp + n), right = idx(np + n, mp);
      sum += std::abs(rho(left, right));
      if (rho(left, left).real() > threshold && rho(right, right).real() > threshold) {
        const double w = std::sqrt(std::tgamma(mp + n + 1.0) / std::tgamma(mp + 1.0) *
                                   std::tgamma(np + n + 1.0) / std::tgamma(np + 1.0));
        out.s = std::max(out.s, w);
      }
    }
  out.total = norm * sum;
  if (out.s > 0.0) out.measurable = norm * std::abs(moment(rho, cutoff, n, 0, 0, n)) / out.s;
  return out;
}

Spin spin(const Eigen::MatrixXcd& rho, int cutoff) {
  const TwoModeOps ops = two_mode_ops(cutoff);
  const Eigen::MatrixXcd ad = ops.a.adjoint(), bd = ops.b.adjoint();
  const Eigen::MatrixXcd jx = 0.5 * (ad * ops.b + bd * ops.a);
  const Eigen::MatrixXcd jy = complex(0, -0.5) * (ad * ops.b - bd * ops.a);
  const Eigen::MatrixXcd jz = 0.5 * (ad * ops.a - bd * ops.b);
  auto ev = [&](const Eigen::MatrixXcd& op) { return (rho * op).trace().real(); };
  return {ev(jx), ev(jy), ev(jz), ev(jx * jx), ev(jy * jy), ev(jz * jz)};
}

}  // namespace oracle
