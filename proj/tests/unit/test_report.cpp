#include <doctest.h>

#include <cmath>
#include <sstream>

#include "shockdev/report.hpp"

using namespace shockdev;

namespace {

SolverConfig canonical() {
  SolverConfig cfg;
  cfg.cusp.alpha_ddot0 = 0.5;
  cfg.cusp.dbeta_dt0 = 0.5;
  return cfg;
}

}  // namespace

TEST_CASE("check helpers") {
  CHECK(check_rel("x", "analytic", 2.0, 2.1, 0.06).pass);
  CHECK_FALSE(check_rel("x", "analytic", 2.0, 2.2, 0.06).pass);
  CHECK(check_abs("x", "analytic", 0.0, -1e-9, 1e-8).pass);
  CHECK(check_less("x", "structural", 0.5, 1.0).pass);
  CHECK_FALSE(check_greater("x", "structural", 0.5, 1.0).pass);
  CHECK_FALSE(check_abs("x", "analytic", 0.0, NAN, 1.0).pass);
  CHECK_FALSE(check_less("x", "structural", NAN, 1.0).pass);
}

TEST_CASE("verify report covers the pointwise criteria") {
  const DiagnosticsReport r = verify_report(canonical());
  REQUIRE(r.criteria.size() == 3);
  CHECK(r.mode == "verify");
  for (const Criterion& c : r.criteria) CHECK_MESSAGE(c.pass(), c.title);
  CHECK(r.all_pass());
  CHECK(failures_match(r, {}));
  CHECK_FALSE(failures_match(r, {2}));
}

TEST_CASE("report JSON is deterministic and one summary line per criterion") {
  const SolverConfig cfg = canonical();
  const std::string a = verify_report(cfg).to_json().dump();
  const std::string b = verify_report(cfg).to_json().dump();
  CHECK(a == b);

  std::ostringstream os;
  print_summary(os, verify_report(cfg));
  std::istringstream lines(os.str());
  int count = 0;
  for (std::string line; std::getline(lines, line);)
    if (line.rfind("criterion ", 0) == 0) ++count;
  CHECK(count == 3);
}

TEST_CASE("failures_match compares the exact failed set") {
  DiagnosticsReport r;
  Criterion ok{1, "a", {check_less("x", "structural", 0.0, 1.0)}, {}};
  Criterion bad{9, "b", {check_less("x", "structural", 2.0, 1.0)}, {}};
  Criterion threw{4, "c", {}, "boom"};
  r.criteria = {ok, bad};
  CHECK(failures_match(r, {9}));
  CHECK_FALSE(failures_match(r, {}));
  CHECK_FALSE(failures_match(r, {1, 9}));
  r.criteria.push_back(threw);
  CHECK_FALSE(threw.pass());
  CHECK(failures_match(r, {9, 4}));
}
