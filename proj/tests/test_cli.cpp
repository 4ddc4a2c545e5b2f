#include <cmath>
#include <sstream>

#include "doctest.h"
#include "cli.hpp"

using namespace fastfpt;
using namespace fastfpt::cli;

TEST_CASE("model specs parse with defaults and reject junk") {
  CHECK(parse_model("halfline")->time_scale() == doctest::Approx(0.25));
  CHECK(parse_model("halfline:L=2,D=1")->time_scale() == doctest::Approx(1.0));
  CHECK(parse_model("exponential:rate=4")->time_scale() == doctest::Approx(0.25));
  const auto grid = std::get<PowerLaw>(parse_model("grid")->short_time_law());
  CHECK(grid.p == 3.0);
  CHECK(model_from_json(nlohmann::json{{"type", "sphere"}, {"L", 1.0}})->name() ==
        parse_model("sphere:L=1")->name());

  CHECK_THROWS_AS(parse_model("bogus"), std::invalid_argument);
  CHECK_THROWS_AS(parse_model("halfline:X=1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_model("halfline:L=abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_model("halfline:L=-1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_model("ctmc:file=/nonexistent.json"), std::exception);
}

TEST_CASE("config file values are overridden field by field") {
  const nlohmann::json j = {{"model", "power:A=1,p=2"}, {"lambda", {1.0, 10.0}}, {"k", {1, 3}},
                            {"trials", 500},          {"seed", 9},              {"variant", "theorem"}};
  ExperimentConfig base;
  base.workers = 3;
  auto c = config_from_json(j, base);
  CHECK(c.model == "power:A=1,p=2");
  CHECK(c.lambdas == std::vector<double>{1.0, 10.0});
  CHECK(c.ks == std::vector<int>{1, 3});
  CHECK(c.trials == 500);
  CHECK(c.seed == 9);
  CHECK(c.workers == 3);
  CHECK(c.variant == ScalingVariant::Theorem);

  CHECK_THROWS_AS(config_from_json({{"lamda", 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json({{"trials", "many"}}), std::invalid_argument);
  ExperimentConfig bad;
  bad.ks = {0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.format = "xml";
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK(parse_double_list("1e2, 3,0.5") == std::vector<double>{100.0, 3.0, 0.5});
  CHECK_THROWS_AS(parse_int_list("1,x"), std::invalid_argument);
}

TEST_CASE("tables round trip through csv and json") {
  Table t{"demo", {"x", "label", "y"}, {}};
  t.add_row({0.1, std::string("plain"), std::nan("")});
  t.add_row({1e-300, std::string("has, comma and \"quotes\""), -INFINITY});
  t.add_row({3.0, std::string("42"), 0.30000000000000004});
  CHECK_THROWS_AS(t.add_row({1.0}), std::logic_error);

  std::stringstream csv;
  write_csv(t, csv);
  CHECK(csv.str().rfind("# fastfpt v0.1.0 demo\n", 0) == 0);
  const Table from_csv = read_csv(csv);
  CHECK(from_csv == t);
  CHECK(std::holds_alternative<std::string>(from_csv.rows[2][1]));

  const auto text = to_json(t).dump();
  CHECK(table_from_json(nlohmann::json::parse(text)) == t);

  std::stringstream broken("x,y\n1,2\n");
  CHECK_THROWS_AS(read_csv(broken), std::invalid_argument);
}

TEST_CASE("same seed gives identical output bytes") {
  ExperimentConfig c;
  c.model = "exponential";
  c.lambdas = {10.0, 100.0};
  c.ks = {1, 2};
  c.trials = 3000;
  c.seed = 5;
  std::stringstream a, b;
  write_csv(cmd_density(c), a);
  c.workers = 4;
  write_csv(cmd_density(c), b);
  CHECK(a.str() == b.str());
  c.seed = 6;
  std::stringstream other;
  write_csv(cmd_density(c), other);
  CHECK(other.str() != a.str());
}

TEST_CASE("density without immigration matches the bare exponential") {
  ExperimentConfig c;
  c.model = "exponential";
  c.lambdas = {0.0};
  c.trials = 20000;
  const auto t = cmd_density(c);
  REQUIRE(!t.rows.empty());
  for (const auto& row : t.rows) {
    const double x = std::get<double>(row[2]);
    CHECK(std::get<double>(row[4]) == doctest::Approx(std::exp(-x)).epsilon(1e-4));
  }
  CHECK(std::get<double>(t.rows[0][7]) < 1.63 / std::sqrt(20000.0));
  c.ks = {2};
  CHECK_THROWS_AS(cmd_density(c), std::invalid_argument);
}

TEST_CASE("command tables have the documented shape") {
  ExperimentConfig c;
  const auto s = cmd_survival(c);
  CHECK(s.columns.size() == 6);
  CHECK(s.rows.size() == 3 * 25);
  const auto k = cmd_constants(c);
  CHECK(k.rows.size() == 7);
  CHECK(std::get<std::string>(k.rows[0][5]) == "ok");
  c.model = "power:A=1,p=1";
  c.lambdas = {100.0};
  const auto e = cmd_equiv(c);
  CHECK(std::get<std::string>(e.rows[0][1]) == "power");
  CHECK(std::get<double>(e.rows[0][5]) == 100.0);
  c.lambdas = {0.0};
  CHECK_THROWS_AS(cmd_constants(c), std::invalid_argument);
}

TEST_CASE("validate passes by default and fails with zero tolerance") {
  ExperimentConfig c;
  c.trials = 20000;
  const auto ok = cmd_validate(c);
  CHECK(ok.passed);
  CHECK(ok.json.at("passed").get<bool>());
  for (const auto& check : ok.json.at("checks")) {
    if (!check.at("known_gap").get<bool>()) CHECK_MESSAGE(check.at("passed").get<bool>(), check.dump());
  }
  c.tolerance_scale = 0.0;
  CHECK_FALSE(cmd_validate(c).passed);
}
