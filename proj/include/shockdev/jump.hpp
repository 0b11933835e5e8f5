#pragma once

#include <vector>

#include "shockdev/state.hpp"

namespace shockdev {

struct JumpPair {
  RiemannPair ahead;   // (alpha_-, beta_-)
  RiemannPair behind;  // (alpha_+, beta_+)
};

// The jump [T] written as an integral of dT along the straight segment from the
// ahead state to the behind state in the (alpha, beta) plane, discretized by
// Gauss-Legendre. Each node contributes two rank-one terms
//   weight * (1, c, c^2),
// one with c = c_plus (alpha direction) and one with c = c_minus (beta direction).
// J and V are then evaluated from these terms without cancellation:
//   J = sum_{i<k} w_i w_k (c_i - c_k)^2,   V = sum w_i c_i / sum w_i.
class JumpSegment {
 public:
  JumpSegment(const BarotropicEos& eos, RiemannPair ahead, double d_alpha, double d_beta);

  double jump_function() const;
  double djump_dbeta_plus() const;  // derivative of J with the ahead state held fixed
  double jump_tt() const;           // [T^tt]
  Stress jumps() const;
  double speed() const;
  // V - c_plus(ref) accurately, where the ahead state equals ref + (ahead_da, ahead_db).
  double speed_excess(const BarotropicEos& eos, const PointState& ref, double ahead_da,
                      double ahead_db) const;
  const PointState& ahead() const { return ahead_; }
  const PointState& behind() const { return behind_; }

 private:
  std::vector<double> weight_;
  std::vector<double> speed_;
  std::vector<double> d_alpha_node_;  // alpha offset of each term's node from the ahead state
  std::vector<double> d_beta_node_;
  std::vector<bool> plus_;
  PointState ahead_, behind_;
};

double jump_J(const BarotropicEos& eos, const JumpPair& jp);
// J from stress() differences. Loses accuracy for small jumps; kept as a reference.
double jump_J_direct(const BarotropicEos& eos, const JumpPair& jp);

struct JumpSolveOptions {
  double rel_tol = 1e-13;  // |J| < rel_tol * scale
  int max_iter = 100;
  int max_doublings = 4;
};

// Increment [beta] solving J = 0 on the branch through coincidence, for the
// ahead state and the given [alpha].
double solve_jump_increment(const BarotropicEos& eos, RiemannPair ahead, double d_alpha,
                            const JumpSolveOptions& opt = {});
double solve_jump_beta(const BarotropicEos& eos, double alpha_plus, RiemannPair ahead,
                       const JumpSolveOptions& opt = {});

// Leading cubic coefficient -mu^2 / (192 eta^2) at a state.
double cubic_jump_coefficient(const BarotropicEos& eos, RiemannPair ahead);

double shock_speed(const BarotropicEos& eos, const JumpPair& jp);

struct DeterminismMargin {
  double ahead = 0;   // eta sigma / sqrt(1 - eta^2), behind minus ahead
  double behind = 0;  // min(V - c_plus(ahead), c_plus(behind) - V)
};
DeterminismMargin determinism_margin(const BarotropicEos& eos, const JumpPair& jp);

double hugoniot_residual(const BarotropicEos& eos, const JumpPair& jp);

}  // namespace shockdev
