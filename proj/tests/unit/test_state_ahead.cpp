#include <doctest.h>

#include <cmath>
#include <memory>
#include <nlohmann/json.hpp>

#include "shockdev/errors.hpp"
#include "shockdev/numerics.hpp"
#include "shockdev/state_ahead.hpp"

using namespace shockdev;

namespace {

CuspData canonical_cusp() {
  CuspData c;
  c.alpha_ddot0 = 0.5;
  c.dbeta_dt0 = 0.5;
  return c;
}

}  // namespace

TEST_CASE("synthesis fixes alpha_dot0 from kappa") {
  auto rad = std::make_shared<RadiationEos>();
  const StateAheadModel m = synthesize_model(canonical_cusp(), rad, 5, 0.05);
  CHECK(m.alpha_dot0() == doctest::Approx(3.0).epsilon(1e-14));
  // Independent route: finite-difference c_plus in alpha at the cusp.
  auto cp = [&](double a) { return evaluate(*rad, {a, 0.0}).c_plus; };
  CHECK(std::abs(1.0 / numerics::central_diff4(cp, 0.0, 1e-3) - 3.0) < 1e-8);

  CuspData wrong = canonical_cusp();
  wrong.alpha_dot0 = 2.0;
  CHECK_THROWS_AS(synthesize_model(wrong, rad, 5, 0.05), InconsistentCusp);
  CuspData negative = canonical_cusp();
  negative.kappa = -1.0;
  CHECK_THROWS_AS(synthesize_model(negative, rad, 5, 0.05), InconsistentCusp);
  CHECK_THROWS_AS(synthesize_model(canonical_cusp(), rad, 3, 0.05), ConfigError);
  CHECK_THROWS_AS(synthesize_model(canonical_cusp(), rad, 5, 0.05, {{"r:1,1", 2.0}}), ConfigError);
  CHECK_THROWS_AS(synthesize_model(canonical_cusp(), rad, 5, 0.05, {{"q:1,1", 2.0}}), ConfigError);
}

TEST_CASE("cusp constraints hold as coefficient identities") {
  auto poly = std::make_shared<Poly2Eos>(0.1);
  CuspData c = canonical_cusp();
  c.kappa = 0.7;
  c.lambda = 1.3;
  c.alpha0 = 0.05;
  c.beta0 = -0.02;
  c.r0 = 2.0;
  const StateAheadModel m = synthesize_model(c, poly, 5, 0.05, {{"r:2,0", 0.3}, {"alpha:1,1", -0.2}});
  CHECK(m.eval(Field::r, 0, 0) == 2.0);
  CHECK(m.eval(Field::r, 0, 0, 1, 0) == m.c_plus0());
  CHECK(m.eval(Field::r, 0, 0, 0, 1) == 0.0);
  CHECK(m.eval(Field::r, 0, 0, 0, 2) == 0.0);
  CHECK(m.eval(Field::r, 0, 0, 0, 3) == doctest::Approx(-1.3 / 0.7).epsilon(1e-15));
  CHECK(m.eval(Field::r, 0, 0, 1, 1) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(m.eval(Field::beta, 0, 0, 0, 1) == 0.0);
  CHECK(m.eval(Field::beta, 0, 0, 0, 2) == 0.0);
  CHECK(m.eval(Field::alpha, 0, 0, 0, 1) == m.alpha_dot0());
  CHECK(m.eval(Field::alpha, 0, 0, 0, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.eval(Field::alpha, 0, 0) == 0.05);
  CHECK(m.eval(Field::beta, 0, 0) == -0.02);
  CHECK(m.eval(Field::alpha, 0, 0, 1, 0) == m.a_tilde0());
  CHECK(m.c_plus0() * m.alpha_dot0() > 0.0);

  auto rad = std::make_shared<RadiationEos>();
  const StateAheadModel minimal = synthesize_model(canonical_cusp(), rad, 5, 0.05);
  for (double w : {-0.08, 0.01, 0.09})
    CHECK(minimal.eval(Field::r, 0, w) == doctest::Approx(1.0 - w * w * w / 6.0).epsilon(1e-15));
  CHECK_THROWS_AS(minimal.eval(Field::r, 0.0, 0.2), OutOfBox);
  CHECK_THROWS_AS(minimal.eval(Field::r, 0.03, 0.0), OutOfBox);
}

TEST_CASE("polynomial derivatives agree with finite differences") {
  auto rad = std::make_shared<RadiationEos>();
  const StateAheadModel m = synthesize_model(canonical_cusp(), rad, 5, 0.05,
                                             {{"r:2,0", 0.3}, {"r:1,3", -2.0}, {"alpha:2,1", 0.7}, {"beta:0,5", 4.0}});
  const double t0 = 0.004, w0 = -0.03;
  for (Field f : {Field::alpha, Field::beta, Field::r}) {
    auto in_t = [&](double t) { return m.eval(f, t, w0); };
    auto in_w = [&](double w) { return m.eval(f, t0, w); };
    CHECK(std::abs(m.eval(f, t0, w0, 1, 0) - numerics::central_diff4(in_t, t0, 1e-4)) < 1e-8);
    CHECK(std::abs(m.eval(f, t0, w0, 0, 1) - numerics::central_diff4(in_w, w0, 1e-3)) < 1e-8);
    auto dw_in_t = [&](double t) { return m.eval(f, t, w0, 0, 1); };
    CHECK(std::abs(m.eval(f, t0, w0, 1, 1) - numerics::central_diff4(dw_in_t, t0, 1e-4)) < 1e-8);
    CHECK(std::abs(m.eval_offset(f, t0, w0) - (m.eval(f, t0, w0) - m.eval(f, 0, 0))) < 1e-15);
  }
}

TEST_CASE("singular boundary") {
  auto rad = std::make_shared<RadiationEos>();
  const StateAheadModel m = synthesize_model(canonical_cusp(), rad, 5, 0.05);
  CHECK(m.singular_boundary(0.0) == 0.0);
  CHECK(m.singular_boundary(0.1) == doctest::Approx(0.005).epsilon(1e-14));
  CuspData c = canonical_cusp();
  c.xi = 0.9;
  const StateAheadModel shaped = synthesize_model(c, rad, 5, 0.05);
  const double t = shaped.singular_boundary(0.1);
  CHECK(std::abs(t - 0.005) < 1e-3);
  CHECK(std::abs(shaped.eval(Field::r, t, 0.1, 0, 1)) < 1e-16);
}

TEST_CASE("incoming characteristic from the cusp") {
  auto rad = std::make_shared<RadiationEos>();
  CuspData c = canonical_cusp();
  const StateAheadModel m = synthesize_model(c, rad, 5, 0.05);
  const IncomingCharacteristic ch = incoming_characteristic(m, 0.05, 100);
  const double cubic = std::sqrt(3.0) / 12.0;
  CHECK(cubic == doctest::Approx(1.0 / (6.0 * 2.0 / std::sqrt(3.0))).epsilon(1e-15));

  const auto coeffs = numerics::polyfit(ch.w, ch.t, 5);
  CHECK(std::abs(coeffs[3] / cubic - 1.0) < 1e-2);
  // Low-order terms contribute negligibly next to the cubic over [0, u_max].
  const double cubic_size = cubic * std::pow(0.05, 3);
  for (int p = 0; p < 3; ++p) CHECK(std::abs(coeffs[p]) * std::pow(0.05, p) < 1e-4 * cubic_size);
  CHECK(ch.t[0] == 0.0);
  for (std::size_t i = 1; i < ch.t.size(); ++i) CHECK(ch.t[i] > ch.t[i - 1]);

  // Quartic term of the expansion with l = (dc_minus/dw)_0 and xi.
  c.xi = 0.6;
  const StateAheadModel shaped = synthesize_model(c, rad, 5, 0.05);
  const IncomingCharacteristic s = incoming_characteristic(shaped, 0.05, 64);
  const double k = c.kappa, lam = c.lambda, l = shaped.dcm_dw0();
  const double dc = shaped.c_plus0() - shaped.c_minus0();
  auto expansion = [&](double w) {
    return lam * w * w * w / (6 * k * dc) - (lam * (4 * k - 3 * l) / (k * dc * dc) + c.xi / (k * dc)) * std::pow(w, 4) / 24.0;
  };
  const double e1 = std::abs(s.t[64] - expansion(s.w[64]));
  const double e2 = std::abs(s.t[32] - expansion(s.w[32]));
  CHECK(e1 / e2 > 16.0);
  CHECK(e1 < 1e-2 * std::pow(0.05, 4));
}

TEST_CASE("initial data on the incoming characteristic") {
  auto rad = std::make_shared<RadiationEos>();
  const StateAheadModel m = synthesize_model(canonical_cusp(), rad, 5, 0.01);
  const InitialData d = initial_data(m, 0.01, 64);
  CHECK(d.h_hat[0] == doctest::Approx(std::sqrt(3.0) / 12.0).epsilon(1e-14));
  CHECK(d.alpha_hat[0] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(d.alpha_i[0] == 0.0);
  CHECK(std::abs(d.h_hat[1] - d.h_hat[0]) < 1e-3);
  CHECK(std::abs(d.alpha_hat[1] - d.alpha_hat[0]) < 1e-3);
  for (std::size_t i = 0; i < d.u.size(); ++i) {
    CHECK(d.alpha_i[i] == doctest::Approx(3.0 * d.u[i] + d.u[i] * d.u[i] * d.alpha_hat[i]).epsilon(1e-13));
  }
}

TEST_CASE("coefficient dump") {
  auto rad = std::make_shared<RadiationEos>();
  const StateAheadModel m = synthesize_model(canonical_cusp(), rad, 5, 0.01);
  const auto doc = nlohmann::json::parse(m.dump_json());
  CHECK(doc["cusp"]["alpha_dot0"].get<double>() == doctest::Approx(3.0));
  CHECK(doc["fields"]["r"].size() == 4);
  CHECK(m.dump_json() == m.dump_json());
}
