// Stored CLI fixtures against the brute-force oracles.

#include <catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "noon/io.hpp"
#include "noon/states.hpp"
#include "support/oracles.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using noon::complex;

namespace {

const std::filesystem::path kGolden = NOON_GOLDEN_DIR;

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    FAIL("missing column " << name);
    return 0;
  }
};

Csv read_csv(const std::string& name) {
  std::ifstream in(kGolden / name);
  REQUIRE(in);
  Csv csv;
  std::string line;
  std::getline(in, line);
  std::stringstream hs(line);
  for (std::string f; std::getline(hs, f, ',');) csv.header.push_back(f);
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::vector<double> row;
    // Text cells (status strings) read as NaN.
    for (std::string f; std::getline(ls, f, ',');) {
      char* end = nullptr;
      const double v = std::strtod(f.c_str(), &end);
      row.push_back(*end == '\0' ? v : NAN);
    }
    csv.rows.push_back(row);
  }
  return csv;
}

// Fixtures carry 12 significant digits.
constexpr double kDigits = 1e-10;

}  // namespace

TEST_CASE("splitter fixture matches dense catness") {
  const auto csv = read_csv("splitter_n10.coherence.csv");
  const auto rho = oracle::embed(noon::states::make_binomial_splitter(10), 10);
  REQUIRE(csv.rows.size() == 10);
  for (const auto& r : csv.rows) {
    const auto want = oracle::catness(rho, 10, static_cast<int>(r[csv.col("n")]), 0.0);
    CHECK_THAT(r[csv.col("C_n")], WithinAbs(want.total, kDigits));
    CHECK_THAT(r[csv.col("c_n")], WithinAbs(want.measurable, kDigits));
    CHECK_THAT(r[csv.col("S")], WithinRel(want.s, kDigits));
  }
}

TEST_CASE("attenuation fixture matches explicit Kraus loss") {
  const auto csv = read_csv("attenuate_noon5.coherence.csv");
  const auto pure = oracle::embed(noon::states::make_noon(5), 5);
  REQUIRE(csv.rows.size() == 55);
  for (const auto& r : csv.rows) {
    const double eta = r[csv.col("eta")];
    const int n = static_cast<int>(r[csv.col("n")]);
    const auto want = oracle::catness(oracle::loss(pure, 5, eta, eta), 5, n, 0.0);
    CHECK_THAT(r[csv.col("C_n")], WithinAbs(want.total, kDigits));
    CHECK_THAT(r[csv.col("c_n")], WithinAbs(want.measurable, kDigits));
    if (n == 5) CHECK_THAT(r[csv.col("c_n")], WithinAbs(std::pow(eta, 5), kDigits));
  }
}

TEST_CASE("dynamics fixture matches dense two-mode evolution") {
  const auto csv = read_csv("dynamics_n5.trace.csv");
  const int total = 5, cutoff = 5;
  const double g = 10.0, kappa = 1.0;
  const auto ops = oracle::two_mode_ops(cutoff);
  const Eigen::MatrixXcd ad = ops.a.adjoint(), bd = ops.b.adjoint();
  const Eigen::MatrixXcd h = 0.5 * g * (ad * ad * ops.a * ops.a + bd * bd * ops.b * ops.b) +
                             kappa * (ad * ops.b + bd * ops.a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(h.rows());
  psi0(total * (cutoff + 1) + 0) = 1.0;  // |5, 0>
  const Eigen::VectorXcd coeffs = eig.eigenvectors().adjoint() * psi0;
  for (const auto& r : csv.rows) {
    const double t = r[0];
    Eigen::VectorXcd phased = coeffs;
    for (Eigen::Index k = 0; k < phased.size(); ++k)
      phased(k) *= std::polar(1.0, std::fmod(-eig.eigenvalues()(k) * t, 2 * M_PI));
    const Eigen::VectorXcd psi = eig.eigenvectors() * phased;
    for (int m = 0; m <= total; ++m)
      CHECK_THAT(r[csv.col("P_" + std::to_string(m))],
                 WithinAbs(std::norm(psi((total - m) * (cutoff + 1) + m)), 1e-7));
    const Eigen::MatrixXcd rho = psi * psi.adjoint();
    for (int n = 1; n <= total; ++n)
      CHECK_THAT(r[csv.col("c_" + std::to_string(n))],
                 WithinAbs(oracle::catness(rho, cutoff, n, 1e-12).measurable, 1e-6));
  }
}

TEST_CASE("fringe fixture matches the rotated number distribution") {
  const auto csv = read_csv("fringes_cat.scan.csv");
  const int total = 20, m = 12;
  const auto cat = noon::states::make_embedded_cat(4, total);
  const auto ops = oracle::two_mode_ops(total);
  const auto rho = oracle::embed(cat, total);
  REQUIRE(csv.rows.size() == 128);
  for (std::size_t i = 0; i < csv.rows.size(); i += 8) {
    const double phi = csv.rows[i][0];
    const Eigen::MatrixXcd c = (ops.a + std::polar(1.0, phi) * ops.b) / std::sqrt(2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(c.adjoint() * c);
    double p = 0.0;
    // Only the N = 20 sector is populated, where c^dag c is exact.
    for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k)
      if (eig.eigenvalues()(k) > m - 0.5)
        p += (eig.eigenvectors().col(k).adjoint() * rho * eig.eigenvectors().col(k))(0, 0).real();
    CHECK_THAT(csv.rows[i][1], WithinAbs(p, 1e-9));
  }
  const auto meta = noon::io::Json::parse(noon::io::read_file(kGolden / "fringes_cat.meta.json"));
  CHECK(meta["metadata"]["dominant_omega"] == 12);
}

TEST_CASE("inference fixture bounds") {
  const auto csv = read_csv("infer_synthetic.summary.csv");
  REQUIRE(csv.rows.size() == 8);
  for (const auto& r : csv.rows)
    CHECK_THAT(r[csv.col("min_order")], WithinRel(10.0 / r[csv.col("xi")], kDigits));
}
