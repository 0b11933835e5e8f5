#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

#include "shockdev/free_boundary.hpp"

namespace shockdev {

// Everything one run needs. Files are flat `key = value` text with sections
// (INI) or the same tree as a JSON object:
//
//   [eos]     kind = radiation | poly2 | table, k, table, rho_ref, h_ref
//   [cusp]    kappa, lambda, alpha0, beta0, r0, alpha_ddot0, dbeta_dt0, xi
//   [model]   degree
//   [solver]  eps, n, tol_inner, tol_outer, max_inner, max_outer,
//             max_retries, v_floor, seed_y_slope
//   [output]  grid_csv, shock_csv, report
//   [check]   seed
//   [overrides] r:2,0 = ...   (extra model coefficients, t^a w^b)
//
// Environment variables SHOCKDEV_<SECTION>_<KEY> override file values, e.g.
// SHOCKDEV_SOLVER_EPS=0.005.
struct EosConfig {
  std::string kind = "radiation";
  double k = 0.1;
  std::string table;
  double rho_ref = 1.0;
  double h_ref = 1.0;
};

struct SolverConfig {
  EosConfig eos;
  CuspData cusp;
  int degree = 5;
  std::map<std::string, double> overrides;
  double eps = 0.01;
  int n = 64;
  double tol_inner = 1e-12;
  double tol_outer = 1e-10;
  int max_inner = 400;
  int max_outer = 60;
  int max_retries = 3;
  double v_floor = 0.5;  // in units of the grid step
  double seed_y_slope = 0.0;
  std::string grid_csv = "grid.csv";
  std::string shock_csv = "shock.csv";
  std::string report = "report.json";
  std::uint64_t seed = 1;

  EosPtr make_eos() const;
  ShockConfig shock_config() const;
};

enum class ConfigFormat { ini, json };

using EnvMap = std::map<std::string, std::string>;

// Parse, apply overrides, validate. Every failure is a ConfigError.
SolverConfig parse_config(std::istream& is, ConfigFormat format, const EnvMap& env = {});
// Format from the extension (.json) or a leading '{'.
SolverConfig load_config(const std::string& path, const EnvMap& env);
SolverConfig load_config(const std::string& path);  // uses the process environment

EnvMap process_environment();

// eps > 0, n >= 4, tolerances above machine epsilon, positive iteration caps.
// Grids below 16 intervals are accepted here and flagged by the report.
void validate(const SolverConfig& cfg);

}  // namespace shockdev
