// Acceptance run on a bundled configuration: one PASS/FAIL line per
// criterion. With --expect-fail the exit status is 0 only when exactly the
// listed criteria fail, so a regression elsewhere and an unexpected pass both
// fail the run.

#include <CLI11.hpp>
#include <iostream>

#include "shockdev/config.hpp"
#include "shockdev/errors.hpp"
#include "shockdev/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string config;
  std::vector<int> expect_fail;
  app.add_option("--config", config, "configuration file")->required();
  app.add_option("--expect-fail", expect_fail, "criteria known to fail");
  CLI11_PARSE(app, argc, argv);

  try {
    const shockdev::SolverConfig cfg = shockdev::load_config(config);
    const shockdev::DiagnosticsReport report = shockdev::full_report(shockdev::solve_all(cfg));
    shockdev::print_summary(std::cout, report);
    if (report.criteria.size() != 10) {
      std::cout << "expected 10 criteria, got " << report.criteria.size() << '\n';
      return 1;
    }
    const bool ok = shockdev::failures_match(report, expect_fail);
    std::cout << (ok ? "failed set matches expectation" : "failed set differs from expectation") << '\n';
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
}
