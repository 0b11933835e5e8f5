#include <doctest.h>

#include <cmath>
#include <random>

#include "shockdev/numerics.hpp"
#include "shockdev/state.hpp"

using namespace shockdev;

namespace {

std::vector<RiemannPair> random_pairs(std::size_t count, double spread, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-spread, spread);
  std::vector<RiemannPair> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back({dist(rng), dist(rng)});
  return out;
}

}  // namespace

TEST_CASE("riemann and fluid-state conversions") {
  RadiationEos rad;
  Poly2Eos poly(0.1);
  const FluidState rest = state_from_riemann(rad, {0.0, 0.0});
  CHECK(rest.psi_r == 0.0);
  CHECK(rest.psi_t == doctest::Approx(rad.h_ref()).epsilon(1e-15));
  const RiemannPair origin = riemann_from_state(rad, {rad.h_ref(), 0.0});
  CHECK(std::abs(origin.alpha) < 1e-14);
  CHECK(std::abs(origin.beta) < 1e-14);

  for (const BarotropicEos* eos : {static_cast<const BarotropicEos*>(&rad), static_cast<const BarotropicEos*>(&poly)}) {
    for (const RiemannPair& p : random_pairs(100, 0.6, 7)) {
      const FluidState s = state_from_riemann(*eos, p);
      const FluidState swapped = state_from_riemann(*eos, {p.beta, p.alpha});
      CHECK(swapped.psi_t == doctest::Approx(s.psi_t).epsilon(1e-14));
      CHECK(swapped.psi_r == doctest::Approx(-s.psi_r).epsilon(1e-14));
      const RiemannPair back = riemann_from_state(*eos, s);
      CHECK(std::abs(back.alpha - p.alpha) < 1e-12);
      CHECK(std::abs(back.beta - p.beta) < 1e-12);
      const FluidState again = state_from_riemann(*eos, back);
      CHECK(std::abs(again.psi_t - s.psi_t) < 1e-12 * s.psi_t);
      CHECK(std::abs(again.psi_r - s.psi_r) < 1e-12 * s.psi_t);
      CHECK(std::abs(velocity(p) + s.psi_r / s.psi_t) < 1e-12);
    }
  }
}

TEST_CASE("characteristic speeds") {
  RadiationEos rad;
  const double eta = 1.0 / std::sqrt(3.0);
  auto [cp, cm] = char_speeds(rad, {0.3, 0.3});
  CHECK(cp == doctest::Approx(eta).epsilon(1e-15));
  CHECK(cm == doctest::Approx(-eta).epsilon(1e-15));
  // v = eta means zeta = -artanh(eta).
  const double z = -std::atanh(eta);
  auto [cp2, cm2] = char_speeds(rad, {-z, z});
  CHECK(std::abs(cm2) < 1e-15);
  CHECK(cp2 > cm2);
  for (const RiemannPair& p : random_pairs(1000, 3.0, 11)) {
    auto [a, b] = char_speeds(rad, p);
    CHECK(std::abs(a) < 1.0);
    CHECK(std::abs(b) < 1.0);
    CHECK(a > b);
  }
}

TEST_CASE("source terms") {
  RadiationEos rad;
  Poly2Eos poly(0.1);
  auto [a0, b0] = source_terms(rad, {0.2, 0.2}, 1.0);
  CHECK(a0 == 0.0);
  CHECK(b0 == 0.0);
  // v > 0 when alpha > beta.
  auto [a1, b1] = source_terms(rad, {0.3, -0.1}, 2.0);
  CHECK(a1 < 0.0);
  CHECK(b1 < 0.0);

  // psi-form with H_tilde = (1 + F psi_t^2) H.
  for (const BarotropicEos* eos : {static_cast<const BarotropicEos*>(&rad), static_cast<const BarotropicEos*>(&poly)}) {
    for (const RiemannPair& p : random_pairs(100, 0.6, 3)) {
      const double r = 0.5 + std::abs(p.alpha);
      const PointState s = evaluate(*eos, p);
      const FluidState f = state_from_riemann(*eos, p);
      const double big_h = f.psi_t * f.psi_t - f.psi_r * f.psi_r;
      const double h_tilde = (1.0 + acoustic_f(s.th) * f.psi_t * f.psi_t) * big_h;
      const double a_psi = 2.0 * f.psi_r / (r * h_tilde) * (f.psi_t / s.th.eta + f.psi_r);
      const double b_psi = 2.0 * f.psi_r / (r * h_tilde) * (f.psi_t / s.th.eta - f.psi_r);
      auto [a, b] = source_terms(s, r);
      CHECK(std::abs(a - a_psi) < 1e-10);
      CHECK(std::abs(b - b_psi) < 1e-10);
    }
  }
}

TEST_CASE("stress tensor components") {
  RadiationEos rad;
  CHECK(stress(rad, {0.4, 0.4}).tr == 0.0);
  for (const RiemannPair& p : random_pairs(100, 1.0, 5)) {
    const PointState s = evaluate(rad, p);
    const Stress t = s.stress();
    const double g = 1.0 / (1.0 - s.v * s.v);
    const double w = s.th.rho + s.th.p;
    CHECK(std::abs(t.tt - (w * g - s.th.p)) < 1e-10 * t.tt);
    CHECK(std::abs(t.tr - w * g * s.v) < 1e-10 * t.tt);
    CHECK(std::abs(t.rr - (w * g * s.v * s.v + s.th.p)) < 1e-10 * t.tt);
    CHECK(t.tt > 0.0);
  }
}

TEST_CASE("finite-difference identities of the pointwise algebra") {
  Poly2Eos poly(0.1);
  RadiationEos rad;
  for (const BarotropicEos* eos : {static_cast<const BarotropicEos*>(&rad), static_cast<const BarotropicEos*>(&poly)}) {
    for (const RiemannPair& p : random_pairs(20, 0.5, 19)) {
      const PointState s = evaluate(*eos, p);
      const double h = 1e-3;
      auto along_a = [&](auto field) {
        return numerics::central_diff4([&](double x) { return field(evaluate(*eos, {x, p.beta})); }, p.alpha, h);
      };
      auto along_b = [&](auto field) {
        return numerics::central_diff4([&](double x) { return field(evaluate(*eos, {p.alpha, x})); }, p.beta, h);
      };
      const double tt_a = along_a([](const PointState& q) { return q.stress().tt; });
      const double tr_a = along_a([](const PointState& q) { return q.stress().tr; });
      const double rr_a = along_a([](const PointState& q) { return q.stress().rr; });
      const double tt_b = along_b([](const PointState& q) { return q.stress().tt; });
      const double tr_b = along_b([](const PointState& q) { return q.stress().tr; });
      CHECK(std::abs(tr_a - s.c_plus * tt_a) < 1e-6 * std::abs(tt_a));
      CHECK(std::abs(tr_b - s.c_minus * tt_b) < 1e-6 * std::abs(tt_b));
      CHECK(std::abs(tt_a / s.weight_alpha() - 1.0) < 1e-8);
      CHECK(std::abs(tt_b / s.weight_beta() - 1.0) < 1e-8);
      CHECK(std::abs(rr_a - s.c_plus * s.c_plus * s.weight_alpha()) < 1e-8 * s.weight_alpha());

      const double v_a = along_a([](const PointState& q) { return q.v; });
      const double v_b = along_b([](const PointState& q) { return q.v; });
      CHECK(std::abs(v_a - 0.5 * (1 - s.v * s.v)) < 1e-8);
      CHECK(std::abs(v_b + 0.5 * (1 - s.v * s.v)) < 1e-8);

      const double p_a = along_a([](const PointState& q) { return q.th.p; });
      const double p_b = along_b([](const PointState& q) { return q.th.p; });
      const double expected = s.energy_flux * s.th.eta * (1 - s.v * s.v) / 2.0;
      CHECK(std::abs(p_a / expected - 1.0) < 1e-6);
      CHECK(std::abs(p_b / expected - 1.0) < 1e-6);

      const SpeedGradient g = s.speed_gradient();
      CHECK(std::abs(along_a([](const PointState& q) { return q.c_plus; }) - g.dcp_dalpha) < 1e-8);
      CHECK(std::abs(along_b([](const PointState& q) { return q.c_plus; }) - g.dcp_dbeta) < 1e-8);
      CHECK(std::abs(along_a([](const PointState& q) { return q.c_minus; }) - g.dcm_dalpha) < 1e-8);
      CHECK(std::abs(along_b([](const PointState& q) { return q.c_minus; }) - g.dcm_dbeta) < 1e-8);

      const double da = 0.013, db = -0.007;
      const double direct = evaluate(*eos, {p.alpha + da, p.beta + db}).c_plus - s.c_plus;
      CHECK(std::abs(plus_speed_offset(*eos, s, da, db) - direct) < 1e-14);
    }
  }
}

TEST_CASE("plus speed offset keeps relative accuracy for tiny increments") {
  Poly2Eos poly(0.1);
  const PointState s = evaluate(poly, {0.1, -0.05});
  const double d = 1e-9;
  const SpeedGradient g = s.speed_gradient();
  const double linear = g.dcp_dalpha * d + g.dcp_dbeta * 0.5 * d;
  CHECK(std::abs(plus_speed_offset(poly, s, d, 0.5 * d) / linear - 1.0) < 1e-7);
}
