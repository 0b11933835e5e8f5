#pragma once

#include <cmath>
#include <utility>

#include "shockdev/eos.hpp"

namespace shockdev {

struct RiemannPair {
  double alpha = 0;
  double beta = 0;
};

struct FluidState {
  double psi_t = 0;
  double psi_r = 0;
};

struct Stress {
  double tt = 0, tr = 0, rr = 0;
};

// Derivatives of the characteristic speeds with respect to the invariants.
struct SpeedGradient {
  double dcp_dalpha = 0, dcp_dbeta = 0;
  double dcm_dalpha = 0, dcm_dbeta = 0;
};

// Everything the solvers need at one (alpha, beta) point, evaluated once.
struct PointState {
  RiemannPair ab;
  Thermo th;
  double zeta = 0;      // (beta - alpha) / 2
  double v = 0;         // fluid velocity, -tanh(zeta)
  double lorentz2 = 0;  // 1 / (1 - v^2)
  double c_plus = 0, c_minus = 0;
  double energy_flux = 0;  // G psi_t^2 = (rho + p) / (1 - v^2)

  // dT/dalpha = weight_alpha * (1, c_plus, c_plus^2), likewise for beta.
  double weight_alpha() const;
  double weight_beta() const;
  Stress stress() const;
  SpeedGradient speed_gradient() const;
  // Scale used for every "J = 0" tolerance: (G psi_t^2 (1 - v^2))^2.
  double jump_scale() const { return th.w * th.w; }
};

PointState evaluate(const BarotropicEos& eos, RiemannPair p);

inline double velocity(RiemannPair p) { return -std::tanh(0.5 * (p.beta - p.alpha)); }

RiemannPair riemann_from_state(const BarotropicEos& eos, FluidState s);
FluidState state_from_riemann(const BarotropicEos& eos, RiemannPair p);
std::pair<double, double> char_speeds(const BarotropicEos& eos, RiemannPair p);
std::pair<double, double> source_terms(const BarotropicEos& eos, RiemannPair p, double r);
std::pair<double, double> source_terms(const PointState& s, double r);
Stress stress(const BarotropicEos& eos, RiemannPair p);

// c_plus(ref + (d_alpha, d_beta)) - c_plus(ref) without cancellation, using
// c_plus = tanh(artanh v + artanh eta).
double plus_speed_offset(const BarotropicEos& eos, const PointState& ref, double d_alpha,
                         double d_beta);

// F = (1/eta^2 - 1)/H with H = h_tilde^2; enters only the psi-form of the sources.
double acoustic_f(const Thermo& th);

}  // namespace shockdev
