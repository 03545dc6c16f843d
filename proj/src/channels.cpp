#include "noon/channels.hpp"

#include <cmath>
#include <string>

namespace noon::channels {
namespace {

// table[n][k] = kraus_amplitude(n, k, eta) for 0 <= k <= n <= top.
std::vector<std::vector<double>> kraus_table(int top, double eta) {
  std::vector<std::vector<double>> t(static_cast<std::size_t>(top) + 1);
  for (int n = 0; n <= top; ++n) {
    auto& row = t[static_cast<std::size_t>(n)];
    row.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) row[static_cast<std::size_t>(k)] = kraus_amplitude(n, k, eta);
  }
  return t;
}

double at(const std::vector<std::vector<double>>& t, int n, int k) {
  return t[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

}  // namespace

void validate(const LossSetting& loss) {
  for (double eta : {loss.eta_a, loss.eta_b})
    if (!(eta >= 0.0 && eta <= 1.0))
      throw ValidationError("transmission " + std::to_string(eta) + " outside [0, 1]");
}

double kraus_amplitude(int n, int k, double eta) {
  if (k < 0 || k > n) return 0.0;
  if (eta == 1.0) return k == 0 ? 1.0 : 0.0;
  if (eta == 0.0) return k == n ? 1.0 : 0.0;
  const double lw = fock::log_binomial(n, k) + (n - k) * std::log(eta) + k * std::log1p(-eta);
  return std::exp(0.5 * lw);
}

TwoModeDensityMatrix apply_loss(const TwoModeDensityMatrix& rho, const LossSetting& loss) {
  validate(loss);
  const int c = rho.cutoff();
  const auto side = static_cast<Eigen::Index>(c + 1);
  const auto ta = kraus_table(c, loss.eta_a);
  const auto tb = kraus_table(c, loss.eta_b);
  const Eigen::MatrixXcd& in = rho.entries();

  // Pass over mode a: indices (na, nb) -> (na - k, nb).
  Eigen::MatrixXcd mid = Eigen::MatrixXcd::Zero(in.rows(), in.cols());
  for (int na = 0; na <= c; ++na)
    for (int ma = 0; ma <= c; ++ma)
      for (int k = 0; k <= std::min(na, ma); ++k) {
        const double w = at(ta, na, k) * at(ta, ma, k);
        if (w == 0.0) continue;
        mid.block((na - k) * side, (ma - k) * side, side, side) += w * in.block(na * side, ma * side, side, side);
      }

  // Pass over mode b: indices (na, nb) -> (na, nb - l).
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(in.rows(), in.cols());
  for (int nb = 0; nb <= c; ++nb)
    for (int mb = 0; mb <= c; ++mb)
      for (int l = 0; l <= std::min(nb, mb); ++l) {
        const double w = at(tb, nb, l) * at(tb, mb, l);
        if (w == 0.0) continue;
        for (Eigen::Index i = 0; i < side; ++i)
          for (Eigen::Index j = 0; j < side; ++j)
            out(i * side + nb - l, j * side + mb - l) += w * mid(i * side + nb, j * side + mb);
      }
  return TwoModeDensityMatrix(c, std::move(out));
}

SectorDensityMatrix apply_loss(const FixedNState& state, const LossSetting& loss) {
  validate(loss);
  const int n = state.total_number();
  const auto ta = kraus_table(n, loss.eta_a);
  const auto tb = kraus_table(n, loss.eta_b);
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(static_cast<std::size_t>(n) + 1);
  for (int s = 0; s <= n; ++s) {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(s + 1, s + 1);
    Eigen::VectorXcd branch(s + 1);
    for (int l = 0; l <= n - s; ++l) {
      const int k = n - s - l;
      // Branch amplitude on |s-j, j>: input index m = j + l, a-occupation n - m.
      for (int j = 0; j <= s; ++j) {
        const int m = j + l;
        branch(j) = state.amplitude(m) * at(ta, n - m, k) * at(tb, m, l);
      }
      b.noalias() += branch * branch.adjoint();
    }
    blocks.push_back(std::move(b));
  }
  return SectorDensityMatrix(std::move(blocks));
}

SectorDensityMatrix apply_loss(const SectorDensityMatrix& rho, const LossSetting& loss) {
  validate(loss);
  const int top = rho.max_total();
  const auto ta = kraus_table(top, loss.eta_a);
  const auto tb = kraus_table(top, loss.eta_b);
  std::vector<Eigen::MatrixXcd> mid, out;
  for (int s = 0; s <= top; ++s) {
    mid.push_back(Eigen::MatrixXcd::Zero(s + 1, s + 1));
    out.push_back(Eigen::MatrixXcd::Zero(s + 1, s + 1));
  }
  // Mode a: |s-m, m> -> |s-m-k, m>, block s -> s-k, index kept.
  for (int s = 0; s <= top; ++s) {
    const Eigen::MatrixXcd& b = rho.block(s);
    for (int m = 0; m <= s; ++m)
      for (int mp = 0; mp <= s; ++mp) {
        if (b(m, mp) == 0.0) continue;
        for (int k = 0; k <= std::min(s - m, s - mp); ++k)
          mid[static_cast<std::size_t>(s - k)](m, mp) += at(ta, s - m, k) * at(ta, s - mp, k) * b(m, mp);
      }
  }
  // Mode b: |s-m, m> -> |s-m, m-l>, block s -> s-l, index shifted by l.
  for (int s = 0; s <= top; ++s) {
    const Eigen::MatrixXcd& b = mid[static_cast<std::size_t>(s)];
    for (int m = 0; m <= s; ++m)
      for (int mp = 0; mp <= s; ++mp) {
        if (b(m, mp) == 0.0) continue;
        for (int l = 0; l <= std::min(m, mp); ++l)
          out[static_cast<std::size_t>(s - l)](m - l, mp - l) += at(tb, m, l) * at(tb, mp, l) * b(m, mp);
      }
  }
  return SectorDensityMatrix(std::move(out));
}

complex detected_moment(const FixedNState& state, int n, const LossSetting& loss) {
  validate(loss);
  if (n < 0) throw ValidationError("moment order must be nonnegative");
  const auto mono = fock::OperatorMonomial::correlation(n);
  if (loss.symmetric()) return std::pow(loss.eta_a, n) * fock::moment(state, mono);
  return fock::moment(apply_loss(state, loss), mono);
}

complex detected_moment(const TwoModeDensityMatrix& rho, int n, const LossSetting& loss) {
  validate(loss);
  if (n < 0) throw ValidationError("moment order must be nonnegative");
  const auto mono = fock::OperatorMonomial::correlation(n);
  if (loss.symmetric()) return std::pow(loss.eta_a, n) * fock::moment(rho, mono);
  return fock::moment(apply_loss(rho, loss), mono);
}

}  // namespace noon::channels
