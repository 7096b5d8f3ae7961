#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gbq/config.hpp"
#include "gbq/error.hpp"

using namespace gbq;

TEST_CASE("defaults") {
  const ExperimentConfig c = build_config({});
  CHECK(c.p == 2.0);
  CHECK(c.omega_critical);
  CHECK(c.resolved_omega() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(c.resolved_R() == doctest::Approx(10.0));
  CHECK(c.N == 1024);
  CHECK(c.sweep.p_values.size() == 7);
}

TEST_CASE("INI text with sections, comments and lists") {
  const ConfigMap m = parse_config_text(
      "; leading comment\n"
      "[experiment]\n"
      "p = 3\n"
      "omega = 0.8\n"
      "[sweep]\n"
      "p_values = 1, 2.5\n");
  const ExperimentConfig c = build_config(m);
  CHECK(c.p == 3.0);
  CHECK_FALSE(c.omega_critical);
  CHECK(c.omega == 0.8);
  REQUIRE(c.sweep.p_values.size() == 2);
  CHECK(c.sweep.p_values[1] == 2.5);
}

TEST_CASE("overrides win over file values") {
  ConfigMap m = parse_config_text("[evolution]\nt_end = 50\n");
  apply_override(m, "evolution.t_end=75");
  apply_override(m, "grid.N = 512");
  const ExperimentConfig c = build_config(m);
  CHECK(c.evolution.t_end == 75.0);
  CHECK(c.N == 512);
  CHECK_THROWS_AS(apply_override(m, "no_equals_sign"), ConfigError);
}

TEST_CASE("malformed input is a ConfigError") {
  CHECK_THROWS_AS(build_config({{"experiment.bogus", "1"}}), ConfigError);
  CHECK_THROWS_AS(build_config({{"grid.N", "12.5"}}), ConfigError);
  CHECK_THROWS_AS(build_config({{"experiment.p", "two"}}), ConfigError);
  CHECK_THROWS_AS(build_config({{"output.plotscript", "maybe"}}), ConfigError);
  CHECK_THROWS_AS(read_config_file("/nonexistent/gbq.ini"), ConfigError);
}

TEST_CASE("validation") {
  ExperimentConfig c;
  CHECK_FALSE(validate(c).empty());  // 1/R > a^2 at the defaults
  c.a = 0.03;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = ExperimentConfig{};
  c.omega_critical = false;
  c.omega = 1.2;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = ExperimentConfig{};
  c.cutoff_R = 25.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = ExperimentConfig{};
  c.L = 10.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = ExperimentConfig{};
  c.N = 1023;
  CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("to_map round trip is exact, default text parses to defaults") {
  ExperimentConfig c;
  c.a = 0.0123456789012345;
  c.evolution.dt = 1.0 / 3.0;
  c.omega_critical = false;
  c.omega = 0.61;
  const ExperimentConfig back = build_config(to_map(c));
  CHECK(back.a == c.a);
  CHECK(back.evolution.dt == c.evolution.dt);
  CHECK(back.omega == c.omega);
  CHECK(to_map(build_config(parse_config_text(default_config_text()))) == to_map(ExperimentConfig{}));
}

TEST_CASE("config file on disk") {
  const auto path = std::filesystem::temp_directory_path() / "gbq_test_config.ini";
  {
    std::ofstream out(path);
    out << "[grid]\nL = 50\nN = 2048\n";
  }
  const ExperimentConfig c = build_config(read_config_file(path.string()));
  CHECK(c.L == 50.0);
  CHECK(c.N == 2048);
  std::filesystem::remove(path);
}
