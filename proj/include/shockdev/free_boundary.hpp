#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "shockdev/fixed_bvp.hpp"
#include "shockdev/jump.hpp"

namespace shockdev {

// Shock data at the diagonal nodes v_j. Offsets are stored relative to the
// cusp values; the hatted forms divide out the leading power of v:
//   f = v^2 f_hat, g = v^2 g_hat, g - c_plus0 f = v^3 delta_hat,
//   alpha_plus - alpha_i = v^2 alpha_hat, beta_plus - beta0 = v^2 beta_hat.
// At v = 0 the hatted values are the analytic limits, except delta_hat and
// V_hat which are extrapolated from the first nodes.
struct ShockCurve {
  std::vector<double> v, f, g, y;
  std::vector<double> alpha_plus, beta_plus;
  std::vector<double> speed_excess;  // V - c_plus0
  std::vector<double> f_hat, g_hat, delta_hat, alpha_hat, beta_hat, v_hat;
  std::vector<double> d_alpha, d_beta;  // [alpha], [beta] across the shock
  std::vector<double> jump_residual;    // |J| / scale at the converged jump
  std::vector<JumpPair> pairs;
  std::size_t size() const { return v.size(); }
};

void write_shock_csv(std::ostream& os, const ShockCurve& curve, double c_plus0);

// F_hat(v, y) = (g + r0 - r*(f, v y)) / v^3 with f = v^2 f_hat and g = c_plus0 f + v^3 delta_hat.
// Below v_floor the hatted expansion is evaluated term by term (exact for the
// polynomial model); above, the model is evaluated at (f, v y) directly.
double identification_residual(const StateAheadModel& model, double f_hat, double delta_hat, double v,
                               double y, double v_floor);
double identification_slope(const StateAheadModel& model, double f_hat, double v, double y,
                            double v_floor);

struct IdentificationOptions {
  double tol = 1e-13;  // |F_hat| < tol * lambda / kappa
  double bracket = 0.5;
  int max_iter = 100;
};

double solve_identification(const StateAheadModel& model, double f_hat, double delta_hat, double v,
                            double y_guess, double v_floor, const IdentificationOptions& opt = {});

// Jump across the shock at one diagonal node: the ahead state is the model at
// (f, z); [beta] solves J = 0 for the given alpha_plus. Offsets are relative to
// the cusp state so that small jumps keep their accuracy.
struct JumpNode {
  JumpPair pair;
  double d_alpha = 0, d_beta = 0;
  double beta_offset = 0;   // beta_plus - beta0
  double speed_excess = 0;  // V - c_plus0
  double residual = 0;      // |J| / scale
};

JumpNode jump_update(const StateAheadModel& model, double f, double z, double alpha_plus,
                     const JumpSolveOptions& opt = {});

struct OuterContext {
  const StateAheadModel* model = nullptr;
  const InitialData* init = nullptr;
  TriGrid grid;
  FixedBvpOptions inner{};
  IdentificationOptions ident{};
  JumpSolveOptions jump{};
};

struct OuterStep {
  BoundaryFunctions next;
  FixedBvpResult inner;
  ShockCurve curve;
};

// One pass boundary functions -> fixed BVP -> identification -> jump conditions.
OuterStep outer_iterate(const BoundaryFunctions& bf, const OuterContext& ctx);

// max(sup |dy|, sup |d/dv d beta_hat|, sup |d V_hat|) between two triples.
double boundary_distance(const BoundaryFunctions& a, const BoundaryFunctions& b, double delta);

struct ShockConfig {
  CuspData cusp;
  EosPtr eos;
  int degree = 5;
  std::map<std::string, double> overrides;
  double eps = 0.01;
  int n = 64;
  FixedBvpOptions inner{};
  double tol_outer = 1e-10;
  int max_outer = 60;
  int max_retries = 3;  // eps halvings after a failed outer iteration
  double seed_y_slope = 0.0;  // initial y = -1 + slope * v
};

struct ShockSolution {
  StateAheadModel model;
  InitialData init;
  TriGrid grid;
  BoundaryFunctions boundary;
  FixedBvpResult inner;
  ShockCurve curve;
  std::vector<double> outer_history;
  std::vector<double> inner_ratios;  // contraction ratio of each inner solve
  double eps_requested = 0;
  int retries = 0;
  double outer_ratio() const;
};

ShockSolution run_shock_development(const ShockConfig& config);

}  // namespace shockdev
