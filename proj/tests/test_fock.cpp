#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "noon/fock.hpp"
#include "noon/states.hpp"
#include "support/oracles.hpp"
#include "support/random_states.hpp"

using namespace noon;
using namespace noon::fock;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

FixedNState vacuum() { return FixedNState(0, {1.0}); }

}  // namespace

TEST_CASE("log factorials match direct products") {
  double lf = 0.0;
  for (int n = 1; n <= 170; ++n) {
    lf += std::log(static_cast<double>(n));
    CHECK_THAT(log_factorial(n), WithinRel(lf, 1e-13));
  }
  CHECK(log_factorial(0) == 0.0);
  CHECK_THAT(log_binomial(10, 3), WithinRel(std::log(120.0), 1e-14));
  CHECK_THAT(log_falling_factorial(7, 3), WithinRel(std::log(210.0), 1e-14));
  CHECK_THAT(log_factorial(10000), WithinRel(std::lgamma(10001.0), 1e-14));
  CHECK_THROWS_AS(log_factorial(-1), ValidationError);
  CHECK_THROWS_AS(log_binomial(3, 4), ValidationError);
}

TEST_CASE("FixedNState normalizes and validates") {
  const FixedNState s(2, {1.0, 1.0, complex(0, 1)});
  double total = 0;
  for (int m = 0; m <= 2; ++m) total += s.probability(m);
  CHECK_THAT(total, WithinAbs(1.0, 1e-12));
  CHECK_THROWS_AS(FixedNState(2, {1.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(FixedNState(1, {0.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(FixedNState(-1, {}), ValidationError);
  CHECK_THROWS_AS(FixedNState(1, {std::nan(""), 1.0}), ValidationError);
}

TEST_CASE("TwoModeDensityMatrix rejects invalid matrices") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(0, 0) = 0.5;
  m(3, 3) = 0.5;
  CHECK_NOTHROW(TwoModeDensityMatrix(1, m));
  Eigen::MatrixXcd bad_trace = m;
  bad_trace(0, 0) = 0.6;
  CHECK_THROWS_AS(TwoModeDensityMatrix(1, bad_trace), ValidationError);
  Eigen::MatrixXcd not_hermitian = m;
  not_hermitian(0, 3) = 0.1;
  CHECK_THROWS_AS(TwoModeDensityMatrix(1, not_hermitian), ValidationError);
  Eigen::MatrixXcd not_positive = m;
  not_positive(0, 3) = 0.6;
  not_positive(3, 0) = 0.6;
  CHECK_THROWS_AS(TwoModeDensityMatrix(1, not_positive), ValidationError);
  Eigen::MatrixXcd negative = m;
  negative(0, 0) = -0.1;
  negative(1, 1) = 0.1;
  CHECK_THROWS_AS(TwoModeDensityMatrix(1, negative), ValidationError);
  CHECK_THROWS_AS(TwoModeDensityMatrix(2, m), ValidationError);
}

TEST_CASE("moment examples") {
  CHECK_THAT(moment(states::make_noon(2), OperatorMonomial::correlation(2)).real(), WithinAbs(1.0, 1e-12));
  CHECK(std::abs(moment(vacuum(), {1, 0, 0, 1})) == 0.0);
  CHECK_THAT(moment(states::make_binomial_splitter(3), OperatorMonomial::correlation(2)).real(),
             WithinAbs(1.5, 1e-12));
  CHECK_THAT(moment(states::make_noon(2, std::numbers::pi), OperatorMonomial::correlation(2)).real(),
             WithinAbs(-1.0, 1e-12));
}

TEST_CASE("number selection rule is exact") {
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 6; ++n) {
    const auto s = randomstate::fixed(rng, n);
    CHECK(moment(s, {1, 0, 0, 0}) == complex(0.0));
    CHECK(moment(s, {2, 1, 0, 1}) == complex(0.0));
    CHECK(moment(s, {0, 0, 1, 1}) == complex(0.0));
  }
}

TEST_CASE("moments agree with dense oracle and across representations") {
  std::mt19937_64 rng(12);
  for (int total = 1; total <= 12; ++total) {
    const auto s = randomstate::fixed(rng, total);
    const auto rho = to_density_matrix(s);
    const auto sec = to_sectors(s);
    for (int n = 1; n <= total; ++n) {
      const auto mono = OperatorMonomial::correlation(n);
      const complex pure = moment(s, mono);
      const complex dense = moment(rho, mono);
      const complex sector = moment(sec, mono);
      const double scale = std::max(1.0, std::abs(pure));
      CHECK(std::abs(pure - dense) <= 1e-10 * scale);
      CHECK(std::abs(pure - sector) <= 1e-10 * scale);
      if (total <= 6) CHECK(std::abs(pure - oracle::moment(rho.entries(), total, n, 0, 0, n)) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("general monomials on mixed states match the oracle") {
  std::mt19937_64 rng(13);
  const auto rho = randomstate::dense(rng, 3, 3);
  const OperatorMonomial monos[] = {{1, 0, 0, 1}, {0, 1, 1, 0}, {1, 1, 1, 1}, {2, 0, 1, 1}, {1, 0, 0, 0}, {0, 0, 1, 2}};
  for (const auto& m : monos) {
    const complex got = moment(rho, m);
    const complex want = oracle::moment(rho.entries(), 3, m.p, m.q, m.r, m.s);
    CHECK(std::abs(got - want) < 1e-10);
    const complex conj = moment(rho, {m.r, m.s, m.p, m.q});
    CHECK(std::abs(got - std::conj(conj)) < 1e-10);
  }
}

TEST_CASE("dense moments beyond the cutoff are rejected") {
  const auto rho = to_density_matrix(states::make_noon(2));
  CHECK_THROWS_AS(moment(rho, OperatorMonomial::correlation(3)), TruncationError);
  CHECK_THROWS_AS(OperatorMonomial(-1, 0, 0, 0), ValidationError);
}

TEST_CASE("large-N moments stay finite through log space") {
  const auto s = states::make_binomial_splitter(500);
  const complex v = moment_scaled(s, OperatorMonomial::correlation(250), log_factorial(500) - log_factorial(250));
  // N!/(2^n (N-n)!) scaled by (N-n)!/N! leaves 2^-n.
  CHECK_THAT(v.real(), WithinRel(std::exp(-250 * std::log(2.0)), 1e-9));
}

TEST_CASE("to_density_matrix examples") {
  const auto r1 = to_density_matrix(states::make_noon(1));
  CHECK_THAT(std::abs(r1.element(1, 0, 0, 1)), WithinAbs(0.5, 1e-15));
  CHECK_THAT(r1.entries().trace().real(), WithinAbs(1.0, 1e-12));
  const auto r3 = to_density_matrix(states::make_noon(3));
  CHECK_THAT(r3.element(0, 3, 3, 0).real(), WithinAbs(0.5, 1e-15));
}

TEST_CASE("sector round trip and truncation") {
  std::mt19937_64 rng(14);
  const auto sec = randomstate::sectors(rng, 4, 2);
  const auto dense = to_density_matrix(sec);
  CHECK(dense.cutoff() == 4);
  const auto back = to_sectors(dense);
  for (int s = 0; s <= 4; ++s) CHECK((back.block(s) - sec.block(s)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(to_density_matrix(sec, 2), TruncationError);
}

TEST_CASE("schwinger moment examples") {
  const auto one = FixedNState(1, {1.0, 0.0});
  const auto m1 = schwinger_moments(one);
  CHECK_THAT(m1.jz, WithinAbs(0.5, 1e-15));
  CHECK_THAT(m1.jx, WithinAbs(0.0, 1e-15));
  CHECK_THAT(m1.jy, WithinAbs(0.0, 1e-15));
  for (int n = 2; n <= 8; ++n) {
    const auto m = schwinger_moments(states::make_noon(n));
    CHECK_THAT(m.jx, WithinAbs(0.0, 1e-14));
    CHECK_THAT(m.jy, WithinAbs(0.0, 1e-14));
    CHECK_THAT(m.jz2, WithinAbs(n * n / 4.0, 1e-12));
  }
  const auto cs = schwinger_moments(states::make_binomial_splitter(2));
  CHECK_THAT(cs.jx, WithinAbs(1.0, 1e-14));
  CHECK_THAT(cs.jy, WithinAbs(0.0, 1e-14));
}

TEST_CASE("schwinger moments match dense operators and the rotation identity") {
  std::mt19937_64 rng(15);
  const double angles[] = {0.3, 1.1};
  for (int total = 1; total <= 6; ++total) {
    const auto s = randomstate::fixed(rng, total);
    const auto m = schwinger_moments(s, angles);
    const auto o = oracle::spin(to_density_matrix(s).entries(), total);
    CHECK_THAT(m.jx, WithinAbs(o.jx, 1e-12));
    CHECK_THAT(m.jy, WithinAbs(o.jy, 1e-12));
    CHECK_THAT(m.jz, WithinAbs(o.jz, 1e-12));
    CHECK_THAT(m.jx2, WithinAbs(o.jx2, 1e-12));
    CHECK_THAT(m.jy2, WithinAbs(o.jy2, 1e-12));
    CHECK_THAT(m.jz2, WithinAbs(o.jz2, 1e-12));
    CHECK_THAT(m.ntot, WithinAbs(total, 1e-12));
    const auto blk = spin_block(total);
    const Eigen::VectorXcd v = s.vector();
    for (double th : angles) {
      const Eigen::MatrixXcd jt = std::cos(th) * Eigen::MatrixXcd(blk.jx) + std::sin(th) * Eigen::MatrixXcd(blk.jy);
      CHECK_THAT(m.second_at(th), WithinAbs(v.dot(jt * jt * v).real(), 1e-10));
      CHECK_THAT(m.third_at(th), WithinAbs(v.dot(jt * jt * jt * v).real(), 1e-10));
    }
    CHECK(m.var_y() >= -1e-12);
  }
  CHECK_THROWS_AS(schwinger_moments(states::make_noon(2)).third_at(0.5), ValidationError);

  const auto rho = randomstate::dense(rng, 3, 2);
  const auto md = schwinger_moments(rho);
  const auto od = oracle::spin(rho.entries(), 3);
  CHECK_THAT(md.jx2, WithinAbs(od.jx2, 1e-12));
  CHECK_THAT(md.jy, WithinAbs(od.jy, 1e-12));
}

TEST_CASE("number distribution examples") {
  const auto d4 = number_distribution(states::make_noon(4));
  CHECK(d4.size() == 2);
  CHECK_THAT(d4.at(-4), WithinAbs(0.5, 1e-15));
  CHECK_THAT(d4.at(4), WithinAbs(0.5, 1e-15));
  const auto b2 = number_distribution(states::make_binomial_splitter(2));
  CHECK_THAT(b2.at(-2), WithinAbs(0.25, 1e-15));
  CHECK_THAT(b2.at(0), WithinAbs(0.5, 1e-15));
  CHECK_THAT(b2.at(2), WithinAbs(0.25, 1e-15));
  std::mt19937_64 rng(16);
  const auto r = randomstate::fixed(rng, 7);
  double sum = 0;
  for (const auto& [k, p] : number_distribution(r)) {
    CHECK((k + 7) % 2 == 0);
    sum += p;
  }
  CHECK_THAT(sum, WithinAbs(1.0, 1e-10));
}
