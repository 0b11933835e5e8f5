#include <doctest.h>

#include <sstream>

#include "shockdev/config.hpp"
#include "shockdev/errors.hpp"

using namespace shockdev;

namespace {

SolverConfig ini(const std::string& text, const EnvMap& env = {}) {
  std::istringstream is(text);
  return parse_config(is, ConfigFormat::ini, env);
}

SolverConfig json(const std::string& text, const EnvMap& env = {}) {
  std::istringstream is(text);
  return parse_config(is, ConfigFormat::json, env);
}

}  // namespace

TEST_CASE("empty config gives the defaults") {
  const SolverConfig cfg = ini("");
  CHECK(cfg.eps == 0.01);
  CHECK(cfg.n == 64);
  CHECK(cfg.eos.kind == "radiation");
  CHECK(cfg.degree == 5);
  CHECK(cfg.report == "report.json");
}

TEST_CASE("INI and JSON forms agree") {
  const SolverConfig a = ini("[solver]\neps = 0.02\nn = 32\n[cusp]\nalpha_ddot0 = 0.5\n[eos]\nkind = Poly2\nk = 0.1\n");
  const SolverConfig b =
      json(R"({"solver": {"eps": 0.02, "n": 32}, "cusp": {"alpha_ddot0": 0.5}, "eos": {"kind": "poly2", "k": 0.1}})");
  CHECK(a.eps == b.eps);
  CHECK(a.n == b.n);
  CHECK(a.cusp.alpha_ddot0 == b.cusp.alpha_ddot0);
  CHECK(a.eos.kind == "poly2");
  CHECK(b.eos.kind == "poly2");
  CHECK(a.eos.k == 0.1);
}

TEST_CASE("model coefficient overrides") {
  const SolverConfig cfg = ini("[overrides]\nr:2,0 = 0.25\n");
  REQUIRE(cfg.overrides.count("r:2,0") == 1);
  CHECK(cfg.overrides.at("r:2,0") == 0.25);
}

TEST_CASE("environment overrides the file") {
  const SolverConfig cfg = ini("[solver]\neps = 0.02\n", {{"SHOCKDEV_SOLVER_EPS", "0.005"}, {"SHOCKDEV_SOLVER_N", "48"}});
  CHECK(cfg.eps == 0.005);
  CHECK(cfg.n == 48);
  CHECK_THROWS_AS(ini("", {{"SHOCKDEV_SOLVER_EPSILON", "1"}}), ConfigError);
  CHECK_THROWS_AS(ini("", {{"SHOCKDEV_SOLVER", "1"}}), ConfigError);
}

TEST_CASE("malformed and unknown input is a ConfigError") {
  CHECK_THROWS_AS(ini("[solver\neps = 1\n"), ConfigError);
  CHECK_THROWS_AS(ini("[solver]\nepsilon = 1\n"), ConfigError);
  CHECK_THROWS_AS(ini("[grid]\nn = 1\n"), ConfigError);
  CHECK_THROWS_AS(ini("[solver]\neps = 0.01x\n"), ConfigError);
  CHECK_THROWS_AS(ini("[solver]\nn = 6.5\n"), ConfigError);
  CHECK_THROWS_AS(ini("[solver]\neps = nan\n"), ConfigError);
  CHECK_THROWS_AS(json("{\"solver\": {\"eps\": }"), ConfigError);
  CHECK_THROWS_AS(json(R"({"solver": {"eps": {"value": 1}}})"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/shockdev.ini", EnvMap{}), ConfigError);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(ini("[solver]\neps = 0\n"), ConfigError);
  CHECK_THROWS_AS(ini("[solver]\neps = -0.01\n"), ConfigError);
  CHECK_THROWS_AS(ini("[solver]\nn = 3\n"), ConfigError);
  CHECK_NOTHROW(ini("[solver]\nn = 8\n"));
  CHECK_THROWS_AS(ini("[solver]\ntol_inner = 1e-17\n"), ConfigError);
  CHECK_THROWS_AS(ini("[solver]\nmax_outer = 0\n"), ConfigError);
  CHECK_THROWS_AS(ini("[model]\ndegree = 3\n"), ConfigError);
  CHECK_THROWS_AS(ini("[cusp]\nkappa = 0\n"), ConfigError);
  CHECK_THROWS_AS(ini("[eos]\nkind = stiff\n"), ConfigError);
  CHECK_THROWS_AS(ini("[eos]\nkind = table\n"), ConfigError);
  CHECK_THROWS_AS(ini("[eos]\nkind = poly2\nk = -1\n"), ConfigError);
  CHECK_THROWS_AS(ini("[output]\nreport =\n"), ConfigError);
}

TEST_CASE("shock_config carries the solver settings") {
  const SolverConfig cfg = ini("[solver]\neps = 0.02\nn = 40\nmax_retries = 1\n[cusp]\nlambda = 2\n");
  const ShockConfig sc = cfg.shock_config();
  CHECK(sc.eps == 0.02);
  CHECK(sc.n == 40);
  CHECK(sc.max_retries == 1);
  CHECK(sc.cusp.lambda == 2);
  REQUIRE(sc.eos);
  CHECK(sc.eos->sound_speed_sq(1.0) == doctest::Approx(1.0 / 3.0));
}
