#pragma once

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "shockdev/config.hpp"
#include "shockdev/free_boundary.hpp"

namespace shockdev {

// One measured quantity against its target. `basis` says where the target
// comes from: "analytic" (closed form), "oracle" (independent computation in
// the harness), "structural" (a bound or ordering) or "resolution".
struct Check {
  std::string name;
  std::string basis;
  std::string relation;  // "rel", "abs", "<", ">" or "<="
  double target = 0;
  double measured = 0;
  double tolerance = 0;
  bool pass = false;
};

Check check_rel(std::string name, std::string basis, double target, double measured, double tol);
Check check_abs(std::string name, std::string basis, double target, double measured, double tol);
Check check_less(std::string name, std::string basis, double measured, double bound);
Check check_greater(std::string name, std::string basis, double measured, double bound);

struct Criterion {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  std::string error;  // set when the evaluation itself threw
  bool pass() const;
};

// Solutions shared by the criteria of one run.
struct RunSet {
  SolverConfig config;
  std::optional<ShockSolution> main;     // configured eps and n
  std::optional<ShockSolution> coarse;   // n / 2
  std::optional<ShockSolution> fine;     // 2 n
  std::optional<ShockSolution> half_eps;
  std::optional<ShockSolution> perturbed;  // seed y = -1 + 0.1 v
  std::optional<ShockSolution> moving;     // alpha0 = -beta0 = 0.05, so the cusp fluid moves
  std::string main_error;
};

// Runs the configured solve; the companion solves are attempted only after
// it converges. Errors of the main solve are stored, not thrown.
RunSet solve_all(const SolverConfig& cfg);

struct DiagnosticsReport {
  std::string mode;  // "run" or "verify"
  std::vector<Criterion> criteria;
  nlohmann::ordered_json histories = nlohmann::ordered_json::object();
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  bool all_pass() const;
  std::vector<int> failed() const;
  nlohmann::ordered_json to_json() const;
};

Criterion eos_identities(const SolverConfig& cfg);
Criterion jump_degeneracy(const SolverConfig& cfg);
Criterion cubic_jump_law(const SolverConfig& cfg);
Criterion inner_asymptotics(const RunSet& runs);
Criterion outer_fixed_point(const RunSet& runs);
Criterion shock_geometry(const RunSet& runs);
Criterion jump_residuals(const RunSet& runs);
Criterion grid_convergence(const RunSet& runs);
Criterion convergence_structure(const RunSet& runs);
Criterion blowup_signature(const RunSet& runs);

// One line per criterion, "criterion <id> PASS|FAIL <title>", followed by the
// failing checks of failed criteria.
void print_summary(std::ostream& os, const DiagnosticsReport& report);

// True when the failed criteria are exactly `expected`; an unexpected pass
// counts as a mismatch just like an unexpected failure.
bool failures_match(const DiagnosticsReport& report, std::vector<int> expected);

// Criteria 1-3 only, no PDE solve.
DiagnosticsReport verify_report(const SolverConfig& cfg);
// All ten criteria from a solved RunSet.
DiagnosticsReport full_report(const RunSet& runs);

}  // namespace shockdev
