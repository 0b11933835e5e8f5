#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <sstream>

#include "shockdev/errors.hpp"
#include "shockdev/free_boundary.hpp"
#include "shockdev/numerics.hpp"

using namespace shockdev;

namespace {

ShockConfig canonical_config() {
  ShockConfig cfg;
  cfg.eos = std::make_shared<RadiationEos>();
  cfg.cusp.alpha_ddot0 = 0.5;
  cfg.cusp.dbeta_dt0 = 0.5;
  return cfg;
}

// The converged canonical solution is shared by several cases.
const ShockSolution& canonical_solution() {
  static const ShockSolution sol = run_shock_development(canonical_config());
  return sol;
}

std::vector<double> diag_ratio(const ShockCurve& c, const std::vector<double>& num, double power) {
  std::vector<double> out(c.size(), 0.0);
  for (std::size_t j = 1; j < c.size(); ++j) out[j] = num[j] / std::pow(c.v[j], power);
  return out;
}

// Real roots of a y^3 + b y^2 + c y + d from the companion matrix.
std::vector<double> cubic_roots(double a, double b, double c, double d) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  m(0, 0) = -b / a;
  m(0, 1) = -c / a;
  m(0, 2) = -d / a;
  m(1, 0) = 1.0;
  m(2, 1) = 1.0;
  std::vector<double> roots;
  for (const auto& z : m.eigenvalues())
    if (std::abs(z.imag()) < 1e-12) roots.push_back(z.real());
  return roots;
}

}  // namespace

TEST_CASE("identification at the cusp") {
  auto rad = std::make_shared<RadiationEos>();
  CuspData c;
  const StateAheadModel m = synthesize_model(c, rad, 5, 0.01);
  const double f_hat0 = 1.0 / 6.0;
  CHECK(solve_identification(m, f_hat0, 0.0, 0.0, -1.0, 1e-6) == -1.0);
  CHECK(solve_identification(m, f_hat0, 0.0, 0.0, -1.3, 1e-6) == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(identification_slope(m, f_hat0, 0.0, -1.0, 1e-6) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  CuspData c2;
  c2.kappa = 0.7;
  c2.lambda = 1.3;
  const StateAheadModel m2 = synthesize_model(c2, rad, 5, 0.01);
  const double lead = 1.3 / (6 * 0.49);
  CHECK(identification_slope(m2, lead, 0.0, -1.0, 1e-6) == doctest::Approx(1.3 / (3 * 0.7)).epsilon(1e-14));
  CHECK(identification_residual(m2, lead, 0.0, 0.0, -1.0, 1e-6) == doctest::Approx(0.0));
}

TEST_CASE("perturbed cusp identification matches a companion-matrix cubic") {
  auto rad = std::make_shared<RadiationEos>();
  CuspData c;
  c.kappa = 1.2;
  c.lambda = 0.8;
  const StateAheadModel m = synthesize_model(c, rad, 5, 0.01);
  const double f_hat = c.lambda / (6 * c.kappa * c.kappa);
  for (double delta : {-0.02, 0.005, 0.03}) {
    const double y = solve_identification(m, f_hat, delta, 0.0, -1.0, 1e-6);
    // (lambda / 6 kappa)(y^3 - y) - delta = 0 at v = 0.
    const double k = c.lambda / (6 * c.kappa);
    double best = 1e300;
    for (double r : cubic_roots(k, 0.0, -k, delta))
      if (std::abs(r + 1) < std::abs(best + 1)) best = r;
    CHECK(std::abs(y - best) < 1e-12);
  }
}

TEST_CASE("hatted and direct residuals agree at the floor") {
  auto rad = std::make_shared<RadiationEos>();
  CuspData c;
  c.xi = 0.7;
  const StateAheadModel m = synthesize_model(c, rad, 5, 0.01, {{"r:2,0", 0.4}, {"r:1,2", -0.3}});
  const double floor = 0.5 * 0.01 / 64;
  for (double y : {-1.2, -1.0, -0.9}) {
    const double hatted = identification_residual(m, 0.17, 0.01, floor * (1 - 1e-12), y, floor);
    const double direct = identification_residual(m, 0.17, 0.01, floor, y, floor);
    CHECK(std::abs(hatted - direct) < 1e-9);
    const double s_hatted = identification_slope(m, 0.17, floor * (1 - 1e-12), y, floor);
    const double s_direct = identification_slope(m, 0.17, floor, y, floor);
    CHECK(std::abs(s_hatted - s_direct) < 1e-9);
  }
  CHECK_THROWS_AS(solve_identification(m, 0.17, 0.0, 0.0, 0.5, 1e-6, {1e-13, 0.2, 100}), NoRoot);
}

TEST_CASE("jump update at and near coincidence") {
  const ShockConfig cfg = canonical_config();
  const StateAheadModel m = synthesize_model(cfg.cusp, cfg.eos, 5, cfg.eps);
  const JumpNode at = jump_update(m, 0.0, 0.0, m.cusp().alpha0);
  CHECK(at.d_alpha == 0.0);
  CHECK(at.d_beta == 0.0);
  CHECK(at.speed_excess == 0.0);

  // Ahead state fixed, jump in alpha shrinking: [beta] falls off like [alpha]^3.
  const double f = 1e-6, z = -2e-3;
  const double da_ahead = m.eval_offset(Field::alpha, f, z);
  double prev = NAN;
  for (double s : {4e-3, 2e-3, 1e-3}) {
    const JumpNode jn = jump_update(m, f, z, m.cusp().alpha0 + da_ahead + s);
    CHECK(jn.d_alpha == doctest::Approx(s).epsilon(1e-12));
    CHECK(jn.residual < 1e-10);
    CHECK(jn.beta_offset == doctest::Approx(m.eval_offset(Field::beta, f, z) + jn.d_beta).epsilon(1e-14));
    const double ratio = jn.d_beta / (s * s * s);
    if (!std::isnan(prev)) CHECK(ratio == doctest::Approx(prev).epsilon(0.05));
    prev = ratio;
  }
  CHECK(prev < 0);
}

TEST_CASE("seed step keeps the cusp values") {
  ShockConfig cfg = canonical_config();
  const StateAheadModel m = synthesize_model(cfg.cusp, cfg.eos, 5, cfg.eps);
  const InitialData init = initial_data(m, cfg.eps, 32);
  OuterContext ctx;
  ctx.model = &m;
  ctx.init = &init;
  ctx.grid = TriGrid(cfg.eps, 32);
  const BoundaryFunctions seed = BoundaryFunctions::seed(m, ctx.grid);
  CHECK(seed.beta_hat_plus[0] == doctest::Approx(0.5 / 6.0).epsilon(1e-15));
  const OuterStep step = outer_iterate(seed, ctx);
  CHECK(step.next.y[0] == -1.0);
  CHECK(step.next.beta_hat_plus[0] == seed.beta_hat_plus[0]);
  CHECK(step.curve.beta_plus[0] == m.cusp().beta0);
  CHECK(step.curve.speed_excess[0] == 0.0);
  CHECK(step.curve.d_alpha[0] == 0.0);
  for (std::size_t j = 1; j < step.curve.size(); ++j) CHECK(step.curve.jump_residual[j] < 1e-10);
}

TEST_CASE("canonical shock development converges") {
  const ShockSolution& s = canonical_solution();
  const ShockCurve& c = s.curve;
  const int n = s.grid.n;
  CHECK(s.retries == 0);
  CHECK(s.outer_history.back() < 1e-10);
  CHECK(s.outer_ratio() < 1.0);

  // y stays near -1 and departs linearly. With this data the slope is negative.
  const double eps = s.grid.eps;
  CHECK(std::abs(c.y[n] + 1.0) <= 2.0 * eps);
  CHECK(std::abs(c.y[n] + 1.0) > 0.1 * eps);

  // Hatted limits.
  CHECK(numerics::extrapolate_to_zero(c.v, c.f_hat) == doctest::Approx(1.0 / 6.0).epsilon(0.05));
  CHECK(numerics::extrapolate_to_zero(c.v, c.g_hat) ==
        doctest::Approx(s.model.c_plus0() / 6.0).epsilon(0.05));
  CHECK(std::abs(numerics::extrapolate_to_zero(c.v, c.y) + 1.0) < 0.02);
  CHECK(numerics::extrapolate_to_zero(c.v, c.beta_hat) == doctest::Approx(0.5 / 6.0).epsilon(0.1));
  CHECK(std::abs(numerics::extrapolate_to_zero(c.v, c.alpha_hat)) < 0.02 * s.model.alpha_dot0());
  CHECK(std::abs(numerics::extrapolate_to_zero(c.v, c.delta_hat)) < 10 * s.grid.delta());

  // Jump structure: [alpha] ~ 2 alpha_dot0 v and [beta] / [alpha]^3 -> -1/144.
  CHECK(numerics::extrapolate_to_zero(c.v, diag_ratio(c, c.d_alpha, 1)) == doctest::Approx(6.0).epsilon(0.05));
  std::vector<double> cubic(c.size(), 0.0);
  for (std::size_t j = 1; j < c.size(); ++j) cubic[j] = c.d_beta[j] / std::pow(c.d_alpha[j], 3);
  CHECK(numerics::extrapolate_to_zero(c.v, cubic) == doctest::Approx(-1.0 / 144.0).epsilon(0.1));
}

TEST_CASE("converged shock satisfies the jump and geometry conditions") {
  const ShockSolution& s = canonical_solution();
  const ShockCurve& c = s.curve;
  const int n = s.grid.n;
  const double d = s.grid.delta();
  const BarotropicEos& eos = s.model.eos();

  std::vector<double> ex(c.size());
  for (int j = 0; j <= n; ++j) ex[j] = s.inner.fields.r_excess(j, j);
  const std::vector<double> df = sample_derivative(c.f, d);
  const std::vector<double> dex = sample_derivative(ex, d);
  std::vector<double> ratio(c.size(), 0.0), ahead_margin(c.size(), 0.0), behind_margin(c.size(), 0.0);
  for (int j = 1; j <= n; ++j) {
    CHECK(c.jump_residual[j] < 1e-10);
    // df/dv V - dg/dv written with the c_plus0 parts cancelled.
    CHECK(std::abs(c.speed_excess[j] * df[j] - dex[j]) < 5 * d * d);
    const double t_star = s.model.singular_boundary(c.v[j] * c.y[j]);
    CHECK(c.f[j] < t_star);
    ratio[j] = c.f[j] / t_star;
    const PointState ahead = evaluate(eos, c.pairs[j].ahead);
    const PointState behind = evaluate(eos, c.pairs[j].behind);
    const double speed = s.model.c_plus0() + c.speed_excess[j];
    ahead_margin[j] = (speed - ahead.c_plus) / c.v[j];
    behind_margin[j] = (behind.c_plus - speed) / c.v[j];
    CHECK(ahead_margin[j] > 0);
    CHECK(behind_margin[j] > 0);
  }
  CHECK(numerics::extrapolate_to_zero(c.v, ratio) == doctest::Approx(1.0 / 3.0).epsilon(0.1));
  CHECK(numerics::extrapolate_to_zero(c.v, ahead_margin) == doctest::Approx(1.0).epsilon(0.15));
  CHECK(numerics::extrapolate_to_zero(c.v, behind_margin) == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("fixed point is idempotent and unique") {
  const ShockSolution& s = canonical_solution();
  OuterContext ctx;
  ctx.model = &s.model;
  ctx.init = &s.init;
  ctx.grid = s.grid;
  const OuterStep again = outer_iterate(s.boundary, ctx);
  CHECK(boundary_distance(again.next, s.boundary, s.grid.delta()) < 10 * 1e-10);

  ShockConfig perturbed = canonical_config();
  perturbed.seed_y_slope = 0.1;
  const ShockSolution p = run_shock_development(perturbed);
  CHECK(boundary_distance(p.boundary, s.boundary, s.grid.delta()) < 5 * 1e-10);
}

TEST_CASE("sign of the y slope follows the cusp data") {
  ShockConfig cfg = canonical_config();
  cfg.cusp.xi = 10.0;
  const ShockSolution s = run_shock_development(cfg);
  const double y_end = s.curve.y.back();
  CHECK(y_end > -1.0);
  CHECK(y_end < -0.5);
}

TEST_CASE("driver halves eps after a failure") {
  ShockConfig cfg = canonical_config();
  cfg.eps = 0.4;
  cfg.n = 32;
  const ShockSolution s = run_shock_development(cfg);
  CHECK(s.retries == 1);
  CHECK(s.grid.eps == doctest::Approx(0.2));
  CHECK(s.eps_requested == 0.4);

  cfg.max_retries = 0;
  CHECK_THROWS_AS(run_shock_development(cfg), OutOfBox);
  cfg.eos = nullptr;
  CHECK_THROWS_AS(run_shock_development(cfg), ConfigError);
}

TEST_CASE("outer iteration reports its history when it runs out of steps") {
  ShockConfig cfg = canonical_config();
  cfg.n = 16;
  cfg.max_outer = 3;
  cfg.max_retries = 0;
  try {
    run_shock_development(cfg);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    CHECK(e.history().size() == 3);
  }
}

TEST_CASE("shock curve CSV") {
  const ShockSolution& s = canonical_solution();
  std::ostringstream os;
  write_shock_csv(os, s.curve, s.model.c_plus0());
  std::istringstream is(os.str());
  std::string header, first;
  std::getline(is, header);
  std::getline(is, first);
  CHECK(header == "v,f,g,V,y,alpha_plus,beta_plus,f_hat,g_hat,delta_hat,V_hat");
  CHECK(first.rfind("0,0,0,", 0) == 0);
}
