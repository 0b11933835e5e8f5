#include "shockdev/state.hpp"

#include <cmath>

#include "shockdev/errors.hpp"

namespace shockdev {

PointState evaluate(const BarotropicEos& eos, RiemannPair p) {
  PointState s;
  s.ab = p;
  s.th = eos.thermo(0.5 * (p.alpha + p.beta));
  s.zeta = 0.5 * (p.beta - p.alpha);
  s.v = -std::tanh(s.zeta);
  const double ch = std::cosh(s.zeta);
  s.lorentz2 = ch * ch;
  const double eta = s.th.eta;
  s.c_plus = (s.v + eta) / (1.0 + s.v * eta);
  s.c_minus = (s.v - eta) / (1.0 - s.v * eta);
  s.energy_flux = s.th.w * s.lorentz2;
  return s;
}

double PointState::weight_alpha() const {
  const double q = 1.0 + v * th.eta;
  return energy_flux / (2.0 * th.eta) * q * q;
}

double PointState::weight_beta() const {
  const double q = 1.0 - v * th.eta;
  return energy_flux / (2.0 * th.eta) * q * q;
}

Stress PointState::stress() const {
  return {energy_flux - th.p, energy_flux * v, energy_flux * v * v + th.p};
}

SpeedGradient PointState::speed_gradient() const {
  const double one_v2 = 1.0 - v * v;
  const double qp = 1.0 + v * th.eta;
  const double qm = 1.0 - v * th.eta;
  const double one_eta2 = 1.0 - th.eta2;
  SpeedGradient g;
  g.dcp_dalpha = 0.5 * th.mu * one_v2 / (qp * qp);
  g.dcp_dbeta = 0.5 * one_v2 / (qp * qp) * (th.deta - one_eta2);
  g.dcm_dalpha = 0.5 * one_v2 / (qm * qm) * (one_eta2 - th.deta);
  g.dcm_dbeta = -0.5 * th.mu * one_v2 / (qm * qm);
  return g;
}

RiemannPair riemann_from_state(const BarotropicEos& eos, FluidState s) {
  if (!(s.psi_t > std::abs(s.psi_r))) throw OutOfRange("fluid state needs psi_t > |psi_r|");
  const double h = std::sqrt((s.psi_t - s.psi_r) * (s.psi_t + s.psi_r));
  const double zeta = std::atanh(s.psi_r / s.psi_t);
  const double rt = eos.riemann_potential(h);
  return {rt - zeta, rt + zeta};
}

FluidState state_from_riemann(const BarotropicEos& eos, RiemannPair p) {
  const double rt = 0.5 * (p.alpha + p.beta);
  const double rho = eos.rho_of_rho_tilde(rt);
  const double gamma = std::log(eos.h_tilde_of_rho(rho)) - rt;
  const double e = 0.5 * std::exp(gamma);
  return {e * (std::exp(p.beta) + std::exp(p.alpha)), e * (std::exp(p.beta) - std::exp(p.alpha))};
}

std::pair<double, double> char_speeds(const BarotropicEos& eos, RiemannPair p) {
  const PointState s = evaluate(eos, p);
  return {s.c_plus, s.c_minus};
}

std::pair<double, double> source_terms(const PointState& s, double r) {
  if (!(r > 0)) throw OutOfRange("source terms need r > 0");
  const double ve = s.v * s.th.eta;
  return {-2.0 * ve / (r * (1.0 + ve)), -2.0 * ve / (r * (1.0 - ve))};
}

std::pair<double, double> source_terms(const BarotropicEos& eos, RiemannPair p, double r) {
  return source_terms(evaluate(eos, p), r);
}

Stress stress(const BarotropicEos& eos, RiemannPair p) { return evaluate(eos, p).stress(); }

double plus_speed_offset(const BarotropicEos& eos, const PointState& ref, double d_alpha,
                         double d_beta) {
  const double x0 = -ref.zeta + std::atanh(ref.th.eta);
  const double dx = 0.5 * (d_alpha - d_beta) +
                    eos.rapidity_offset(ref.th.rho_tilde, 0.5 * (d_alpha + d_beta));
  return std::sinh(dx) / (std::cosh(x0 + dx) * std::cosh(x0));
}

double acoustic_f(const Thermo& th) {
  return (1.0 / th.eta2 - 1.0) / (th.h_tilde * th.h_tilde);
}

}  // namespace shockdev
