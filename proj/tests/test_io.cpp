#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "noon/coherence.hpp"
#include "noon/io.hpp"
#include "noon/states.hpp"
#include "support/random_states.hpp"

using namespace noon;
using namespace noon::io;

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0) == "0.333333333333");
  CHECK(format_double(1.0 / 3.0, 4) == "0.3333");
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(120.0) == "120");
  CHECK(format_double(1e-20) == "1e-20");
  CHECK(format_double(123456789012345.0, 6) == "1.23457e+14");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(-INFINITY) == "-inf");
  CHECK_THROWS_AS(format_double(1.0, 0), ValidationError);
  CHECK(json_number(1.0 / 3.0, 3).get<double>() == 0.333);
  CHECK(json_number(std::nan("")).is_null());
}

TEST_CASE("tables") {
  Table t{"demo", {"n", "value", "label"}, {}};
  t.add_row({1LL, 0.5, std::string("a")});
  t.add_row({2LL, 1.0 / 7.0, std::string("b")});
  CHECK(to_csv(t, 4) == "n,value,label\n1,0.5,a\n2,0.1429,b\n");
  CHECK_THROWS_AS(t.add_row({1LL}), ValidationError);
  const Json j = to_json(t, 4);
  CHECK(j["columns"][1] == "value");
  CHECK(j["rows"][1][1].get<double>() == 0.1429);
}

TEST_CASE("atomic writes") {
  const auto dir = std::filesystem::temp_directory_path() / "noon_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.csv";
  write_atomic(path, "first\n");
  write_atomic(path, "second\n");
  CHECK(read_file(path) == "second\n");
  for (const auto& e : std::filesystem::directory_iterator(dir)) CHECK(e.path().filename() == "out.csv");
  CHECK_THROWS_AS(write_atomic(dir / "missing" / "x.csv", "x"), ValidationError);
  CHECK_THROWS_AS(read_file(dir / "nope"), ValidationError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("state JSON round trips") {
  std::mt19937_64 rng(61);
  const auto s = randomstate::fixed(rng, 4);
  const auto back = fixed_state_from_json(Json::parse(to_json(s).dump()));
  for (int m = 0; m <= 4; ++m) CHECK(std::abs(back.amplitude(m) - s.amplitude(m)) < 1e-15);
  const Json sj = to_json(s);
  CHECK(sj.contains("total_number"));
  CHECK(sj.contains("amplitudes_re"));
  CHECK(sj.contains("amplitudes_im"));

  const auto rho = randomstate::dense(rng, 2, 2);
  const auto rback = density_matrix_from_json(Json::parse(to_json(rho).dump()));
  CHECK((rback.entries() - rho.entries()).cwiseAbs().maxCoeff() < 1e-15);

  Json extra = sj;
  extra["oops"] = 1;
  CHECK_THROWS_AS(fixed_state_from_json(extra), ValidationError);
  Json short_im = sj;
  short_im["amplitudes_im"].erase(0);
  CHECK_THROWS_AS(fixed_state_from_json(short_im), ValidationError);
  Json bad_cut = to_json(rho);
  bad_cut["cutoff"] = 3;
  CHECK_THROWS_AS(density_matrix_from_json(bad_cut), ValidationError);
}

TEST_CASE("recipe JSON") {
  const auto r = recipe_from_json(Json::parse(R"({"kind": "noon", "n": 5, "phase": 0.0})"));
  CHECK(r.kind == states::RecipeKind::noon);
  CHECK(r.total_number == 5);
  const auto e = recipe_from_json(Json::parse(R"({"kind": "embedded_cat", "n": 20, "left_occupation": 4})"));
  CHECK(e.kind == states::RecipeKind::embedded_initial);
  CHECK(e.left_occupation == 4);
  CHECK(recipe_from_json(to_json(e)).left_occupation == 4);
  CHECK_THROWS_AS(recipe_from_json(Json::parse(R"({"kind": "noon", "n": 5, "colour": 1})")), ValidationError);
  CHECK_THROWS_AS(recipe_from_json(Json::parse(R"({"kind": "noon", "n": 2.5})")), ValidationError);
  CHECK_THROWS_AS(recipe_from_json(Json::parse(R"({"kind": "noon"})")), ValidationError);
  CHECK_THROWS_AS(recipe_from_json(Json::parse(R"({"kind": "binomial_splitter", "n": 3, "phase": 1})")),
                  ValidationError);
  CHECK_THROWS_AS(recipe_from_json(Json::parse(R"({"kind": "number_pair", "n": 3, "left_occupation": 9})")),
                  ValidationError);
}

TEST_CASE("coherence report serialization") {
  const auto rep = coherence::coherence_report(states::make_binomial_splitter(3), {});
  const auto table = coherence_table(rep);
  CHECK(table.columns == std::vector<std::string>{"n", "C_n", "c_n", "norm", "S", "delta"});
  CHECK(table.rows.size() == 3);
  const Json j = to_json(rep);
  CHECK(j["spread"] == 3);
  CHECK(j["support_rule"] == "joint_pair");
  CHECK(j["orders"][1]["elements"].size() == 2);
  const auto noon = coherence::coherence_report(states::make_noon(2), {1});
  CHECK(to_csv(coherence_table(noon)).find("nan") != std::string::npos);
  CHECK(to_json(noon)["orders"][0]["S"].is_null());
}

TEST_CASE("row analysis serialization") {
  const auto row = squeezing::analyze(squeezing::from_moments(100, 45, 0, 0, 75, 5));
  const Json j = to_json(row);
  for (const char* key : {"xi", "min_order", "certified", "chain"}) CHECK(j.contains(key));
  // Squeezed along z: no bound from xi (which uses J_y), but the chain certifies.
  CHECK(j["certified"] == false);
  CHECK(j["inference"] == "certified");
  CHECK(j["chain"].size() == 6);
}
