#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "noon/coherence.hpp"
#include "noon/dynamics.hpp"
#include "noon/states.hpp"

using namespace noon;
using namespace noon::dynamics;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("hamiltonian matrix elements") {
  const auto one = build_hamiltonian(1, 3.0, 1.0);
  CHECK(one.hamiltonian()(0, 0) == 0.0);
  CHECK(one.hamiltonian()(1, 1) == 0.0);
  CHECK(one.hamiltonian()(0, 1) == 1.0);
  const auto two = build_hamiltonian(2, 0.0, 1.0);
  CHECK_THAT(two.eigenvalues()(0), WithinAbs(-2.0, 1e-12));
  CHECK_THAT(two.eigenvalues()(1), WithinAbs(0.0, 1e-12));
  CHECK_THAT(two.eigenvalues()(2), WithinAbs(2.0, 1e-12));
  const auto h = build_hamiltonian(6, 0.7, 0.4);
  CHECK((h.hamiltonian() - h.hamiltonian().transpose()).norm() == 0.0);
  CHECK_THAT(h.hamiltonian()(2, 2), WithinAbs(0.35 * (4 * 3 + 2 * 1), 1e-14));
  CHECK_THAT(h.hamiltonian()(2, 3), WithinAbs(0.4 * std::sqrt(3.0 * 4.0), 1e-14));
  const Eigen::MatrixXd v = h.eigenvectors();
  CHECK((v.transpose() * v - Eigen::MatrixXd::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK_THROWS_AS(build_hamiltonian(0, 1.0), ValidationError);
}

TEST_CASE("evolution basics") {
  const auto sys = build_hamiltonian(1, 0.0, 1.0);
  const auto start = states::make_number_pair(0, 1);
  const auto same = sys.evolve(start, 0.0);
  CHECK(std::abs(same.amplitude(0) - 1.0) < 1e-15);
  const auto flipped = sys.evolve(start, std::numbers::pi / 2);
  CHECK_THAT(flipped.probability(1), WithinAbs(1.0, 1e-12));
  CHECK_THROWS_AS(sys.evolve(states::make_noon(2), 1.0), ValidationError);
}

TEST_CASE("norm and energy conservation, time reversal") {
  const auto sys = build_hamiltonian(12, 0.8, 1.0);
  const auto start = states::make_number_pair(2, 12);
  const std::vector<double> times = {0.0, 0.5, 3.0, 40.0, 1000.0};
  const std::vector<int> orders = {1, 2, 8};
  const auto tr = evolve(sys, start, times, orders);
  for (std::size_t i = 0; i < times.size(); ++i) {
    double sum = 0.0;
    for (double p : tr.pm[i]) sum += p;
    CHECK_THAT(sum, WithinAbs(1.0, 1e-10));
    CHECK_THAT(tr.energy[i], WithinAbs(tr.energy[0], 1e-9));
  }
  const auto fwd = sys.evolve(start, 7.3);
  const auto back = sys.evolve(fwd, -7.3);
  for (int m = 0; m <= 12; ++m) CHECK(std::abs(back.amplitude(m) - start.amplitude(m)) < 1e-9);
  for (double c : tr.cn[0]) CHECK(c == 0.0);
}

TEST_CASE("linear coupling reproduces the beam splitter") {
  for (int n : {3, 6, 10}) {
    const auto sys = build_hamiltonian(n, 0.0, 1.0);
    const auto out = sys.evolve(states::make_number_pair(0, n), std::numbers::pi / 4);
    const auto ref = states::make_binomial_splitter(n);
    for (int k = 1; k <= n; ++k)
      CHECK_THAT(coherence::catness_fidelity(out, k).measurable,
                 WithinAbs(coherence::catness_fidelity(ref, k).measurable, 1e-9));
  }
}

TEST_CASE("tunnelling period conventions") {
  const auto rabi = tunnelling_period(build_hamiltonian(1, 0.0, 1.0), states::make_number_pair(0, 1));
  CHECK_THAT(rabi.spectral, WithinRel(std::numbers::pi / 2, 1e-12));
  CHECK(rabi.relative_difference < 1e-3);

  const auto sys5 = build_hamiltonian(5, 10.0, 1.0);
  const auto p5 = tunnelling_period(sys5, states::make_number_pair(0, 5));
  CHECK(p5.relative_difference < 0.01);
  const auto half = sys5.evolve(states::make_number_pair(0, 5), p5.spectral / 2);
  CHECK(coherence::catness_fidelity(half, 5).measurable > 0.99);
  const auto full = sys5.evolve(states::make_number_pair(0, 5), p5.spectral);
  CHECK(full.probability(5) > 0.99);
}

TEST_CASE("embedded cat from |16,4>") {
  const auto sys = build_hamiltonian(20, 4.0, 1.0);
  const auto start = states::make_number_pair(4, 20);
  const auto p = tunnelling_period(sys, start);
  CHECK_THAT(p.splitting, WithinRel(2.56e-10, 0.01));
  std::vector<int> orders;
  for (int n = 1; n <= 20; ++n) orders.push_back(n);
  const std::vector<double> times = {p.spectral / 4, p.spectral};
  const auto tr = evolve(sys, start, times, orders);
  const auto& c = tr.cn[0];
  CHECK(std::max_element(c.begin(), c.end()) - c.begin() == 11);
  CHECK(tr.pm[1][16] > 0.8);
}

TEST_CASE("unresolvable and invalid period requests") {
  CHECK_THROWS_AS(tunnelling_period(build_hamiltonian(100, 1.0, 1.0), states::make_number_pair(0, 100)),
                  NumericalError);
  CHECK_THROWS_AS(tunnelling_period(build_hamiltonian(4, 1.0, 1.0), states::make_noon(4)), ValidationError);
}

TEST_CASE("ground state") {
  const auto sys = build_hamiltonian(8, 0.0, -1.0);
  const auto gs = ground_state(sys);
  CHECK_THAT(sys.energy(gs), WithinAbs(sys.eigenvalues()(0), 1e-12));
  CHECK_THAT(sys.energy(gs), WithinAbs(-8.0, 1e-12));
  const auto ref = states::make_binomial_splitter(8);
  for (int m = 0; m <= 8; ++m) CHECK_THAT(gs.amplitude(m).real(), WithinAbs(ref.amplitude(m).real(), 1e-12));
}
