#include "shockdev/jump.hpp"

#include <cmath>
#include <limits>

#include "shockdev/errors.hpp"
#include "shockdev/numerics.hpp"

namespace shockdev {

JumpSegment::JumpSegment(const BarotropicEos& eos, RiemannPair ahead, double d_alpha, double d_beta)
    : ahead_(evaluate(eos, ahead)),
      behind_(evaluate(eos, {ahead.alpha + d_alpha, ahead.beta + d_beta})) {
  const auto& rule = numerics::unit_gauss_rule();
  const std::size_t m = rule.nodes.size();
  weight_.reserve(2 * m);
  speed_.reserve(2 * m);
  for (std::size_t k = 0; k < m; ++k) {
    const double s = rule.nodes[k];
    const double da = s * d_alpha, db = s * d_beta;
    const PointState ps = evaluate(eos, {ahead.alpha + da, ahead.beta + db});
    if (d_alpha != 0.0) {
      weight_.push_back(rule.weights[k] * ps.weight_alpha() * d_alpha);
      speed_.push_back(ps.c_plus);
      plus_.push_back(true);
      d_alpha_node_.push_back(da);
      d_beta_node_.push_back(db);
    }
    if (d_beta != 0.0) {
      weight_.push_back(rule.weights[k] * ps.weight_beta() * d_beta);
      speed_.push_back(ps.c_minus);
      plus_.push_back(false);
      d_alpha_node_.push_back(da);
      d_beta_node_.push_back(db);
    }
  }
}

double JumpSegment::jump_function() const {
  double j = 0.0;
  for (std::size_t i = 0; i < weight_.size(); ++i)
    for (std::size_t k = i + 1; k < weight_.size(); ++k) {
      const double dc = speed_[i] - speed_[k];
      j += weight_[i] * weight_[k] * dc * dc;
    }
  return j;
}

double JumpSegment::djump_dbeta_plus() const {
  double sum = 0.0;
  const double cm = behind_.c_minus;
  for (std::size_t i = 0; i < weight_.size(); ++i) {
    const double dc = speed_[i] - cm;
    sum += weight_[i] * dc * dc;
  }
  return behind_.weight_beta() * sum;
}

double JumpSegment::jump_tt() const {
  double sum = 0.0;
  for (double w : weight_) sum += w;
  return sum;
}

Stress JumpSegment::jumps() const {
  Stress out;
  for (std::size_t i = 0; i < weight_.size(); ++i) {
    out.tt += weight_[i];
    out.tr += weight_[i] * speed_[i];
    out.rr += weight_[i] * speed_[i] * speed_[i];
  }
  return out;
}

double JumpSegment::speed() const {
  const double tt = jump_tt();
  if (!(std::abs(tt) > 1e-12 * std::abs(ahead_.stress().tt)))
    throw DegenerateJump("[T^tt] vanishes; states coincide");
  return jumps().tr / tt;
}

double JumpSegment::speed_excess(const BarotropicEos& eos, const PointState& ref, double ahead_da,
                                 double ahead_db) const {
  const double tt = jump_tt();
  if (!(std::abs(tt) > 1e-12 * std::abs(ahead_.stress().tt)))
    throw DegenerateJump("[T^tt] vanishes; states coincide");
  double num = 0.0;
  for (std::size_t i = 0; i < weight_.size(); ++i) {
    const double offset = plus_[i] ? plus_speed_offset(eos, ref, ahead_da + d_alpha_node_[i],
                                                       ahead_db + d_beta_node_[i])
                                   : speed_[i] - ref.c_plus;
    num += weight_[i] * offset;
  }
  return num / tt;
}

double jump_J(const BarotropicEos& eos, const JumpPair& jp) {
  return JumpSegment(eos, jp.ahead, jp.behind.alpha - jp.ahead.alpha, jp.behind.beta - jp.ahead.beta)
      .jump_function();
}

double jump_J_direct(const BarotropicEos& eos, const JumpPair& jp) {
  const Stress a = stress(eos, jp.ahead);
  const Stress b = stress(eos, jp.behind);
  const double tt = b.tt - a.tt, tr = b.tr - a.tr, rr = b.rr - a.rr;
  return tt * rr - tr * tr;
}

double cubic_jump_coefficient(const BarotropicEos& eos, RiemannPair ahead) {
  const PointState s = evaluate(eos, ahead);
  return -s.th.mu * s.th.mu / (192.0 * s.th.eta2);
}

double solve_jump_increment(const BarotropicEos& eos, RiemannPair ahead, double d_alpha,
                            const JumpSolveOptions& opt) {
  if (d_alpha == 0.0) return 0.0;
  const PointState a = evaluate(eos, ahead);
  const double scale = a.jump_scale();
  const double seed = cubic_jump_coefficient(eos, ahead) * d_alpha * d_alpha * d_alpha;
  const double atol = std::numeric_limits<double>::min() * 1e6;
  auto jump_at = [&](double x) { return JumpSegment(eos, ahead, d_alpha, x).jump_function(); };

  double half = 8.0 * std::abs(seed) + atol;
  double lo = seed - half, hi = seed + half;
  double j_lo = jump_at(lo), j_hi = jump_at(hi);
  for (int d = 0; (j_lo > 0) == (j_hi > 0); ++d) {
    if (j_lo == 0.0) return lo;
    if (j_hi == 0.0) return hi;
    if (d == opt.max_doublings)
      throw NoRoot("no sign change of J around the cubic seed for d_alpha = " + std::to_string(d_alpha));
    half *= 2.0;
    lo = seed - half;
    hi = seed + half;
    j_lo = jump_at(lo);
    j_hi = jump_at(hi);
  }

  // Safeguarded Newton: keep a sign-changing bracket, bisect when Newton leaves it.
  double x = seed;
  std::vector<double> history;
  for (int it = 0; it < opt.max_iter; ++it) {
    const JumpSegment seg(eos, ahead, d_alpha, x);
    const double j = seg.jump_function();
    if (j == 0.0) return x;
    if ((j > 0) == (j_lo > 0)) {
      lo = x;
      j_lo = j;
    } else {
      hi = x;
    }
    const double slope = seg.djump_dbeta_plus();
    double next = x - j / slope;
    if (!(next > std::min(lo, hi) && next < std::max(lo, hi))) next = 0.5 * (lo + hi);
    const double step = next - x;
    history.push_back(std::abs(step));
    x = next;
    const double resolution = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x) + atol;
    if (std::abs(step) <= resolution || std::abs(hi - lo) <= resolution) {
      const double j_final = jump_at(x);
      if (std::abs(j_final) < opt.rel_tol * scale) return x;
      throw NonConvergence("jump root stalled with |J|/scale = " + std::to_string(std::abs(j_final) / scale),
                           history);
    }
  }
  throw NonConvergence("jump root did not converge", history);
}

double solve_jump_beta(const BarotropicEos& eos, double alpha_plus, RiemannPair ahead,
                       const JumpSolveOptions& opt) {
  return ahead.beta + solve_jump_increment(eos, ahead, alpha_plus - ahead.alpha, opt);
}

double shock_speed(const BarotropicEos& eos, const JumpPair& jp) {
  return JumpSegment(eos, jp.ahead, jp.behind.alpha - jp.ahead.alpha, jp.behind.beta - jp.ahead.beta)
      .speed();
}

DeterminismMargin determinism_margin(const BarotropicEos& eos, const JumpPair& jp) {
  const PointState a = evaluate(eos, jp.ahead);
  const PointState b = evaluate(eos, jp.behind);
  auto inv_sqrt_q = [](const PointState& s) {
    return s.th.eta * s.th.sigma / std::sqrt(1.0 - s.th.eta2);
  };
  DeterminismMargin m;
  m.ahead = inv_sqrt_q(b) - inv_sqrt_q(a);
  const JumpSegment seg(eos, jp.ahead, jp.behind.alpha - jp.ahead.alpha, jp.behind.beta - jp.ahead.beta);
  if (std::abs(seg.jump_tt()) > 1e-12 * std::abs(a.stress().tt)) {
    const double v = seg.speed();
    m.behind = std::min(v - a.c_plus, b.c_plus - v);
  }
  return m;
}

double hugoniot_residual(const BarotropicEos& eos, const JumpPair& jp) {
  const PointState a = evaluate(eos, jp.ahead);
  const PointState b = evaluate(eos, jp.behind);
  const double ha = a.th.h_tilde, hb = b.th.h_tilde;
  return hb * hb - ha * ha - (b.th.p - a.th.p) * (hb / b.th.sigma + ha / a.th.sigma);
}

}  // namespace shockdev
