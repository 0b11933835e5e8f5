#include "shockdev/report.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <ostream>
#include <random>

#include "shockdev/errors.hpp"
#include "shockdev/jump.hpp"
#include "shockdev/numerics.hpp"

namespace shockdev {

namespace {

using numerics::extrapolate_to_zero;

Check make(std::string name, std::string basis, std::string relation, double target, double measured,
           double tol, bool pass) {
  // NaN never passes.
  return {std::move(name), std::move(basis), std::move(relation), target, measured, tol,
          pass && std::isfinite(measured)};
}

Criterion guarded(int id, std::string title, const std::function<void(Criterion&)>& body) {
  Criterion c;
  c.id = id;
  c.title = std::move(title);
  try {
    body(c);
  } catch (const std::exception& e) {
    c.error = e.what();
  }
  return c;
}

const ShockSolution& need(const std::optional<ShockSolution>& s, const char* what, const RunSet& runs) {
  if (s) return *s;
  if (!runs.main_error.empty()) throw std::runtime_error("main solve failed: " + runs.main_error);
  throw std::runtime_error(std::string("no solution for ") + what);
}

double max_abs(const std::vector<double>& x) {
  double m = 0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

// States at which the pointwise suites are sampled: the cusp state plus a few
// drawn from the configured seed.
std::vector<RiemannPair> sample_pairs(const SolverConfig& cfg, int count) {
  std::vector<RiemannPair> out{{cfg.cusp.alpha0, cfg.cusp.beta0}};
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> pick(-0.3, 0.3);
  for (int k = 0; k < count; ++k) out.push_back({cfg.cusp.alpha0 + pick(rng), cfg.cusp.beta0 + pick(rng)});
  return out;
}

std::vector<double> sample_densities(const BarotropicEos& eos, const SolverConfig& cfg, int count) {
  const double lo = std::max(eos.rho_min() * 1.05, 0.25 * eos.rho_ref());
  const double hi = std::min(eos.rho_max() * 0.95, 2.5 * eos.rho_ref());
  std::mt19937_64 rng(cfg.seed + 1);
  std::uniform_real_distribution<double> pick(std::log(lo), std::log(hi));
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(std::exp(pick(rng)));
  std::sort(out.begin(), out.end());
  return out;
}

// Sigma = (1 - eta^2) / h^2 differentiated in h along the barotrope.
double dsigma_dh(const BarotropicEos& eos, double rho) {
  auto sig = [&](double r) { return (1.0 - eos.dpressure(r)) / std::pow(eos.h_tilde_of_rho(r), 2); };
  auto h = [&](double r) { return eos.h_tilde_of_rho(r); };
  const double step = 1e-3 * rho;
  return numerics::central_diff4(sig, rho, step) / numerics::central_diff4(h, rho, step);
}

std::vector<double> scaled(const ShockCurve& c, const std::vector<double>& num, double power) {
  std::vector<double> out(c.size(), 0.0);
  for (std::size_t j = 1; j < c.size(); ++j) out[j] = num[j] / std::pow(c.v[j], power);
  return out;
}

// Largest |dt/dv - (lambda/3 kappa^2) v| / (u v) over the grid.
double inner_constant(const ShockSolution& s) {
  const auto& c = s.model.cusp();
  const double slope = c.lambda / (3 * c.kappa * c.kappa);
  double worst = 0;
  for (int i = 1; i <= s.grid.n; ++i)
    for (int j = 1; j <= i; ++j) {
      const double u = s.grid.u(i), v = s.grid.v(j);
      worst = std::max(worst, std::abs(s.inner.fields.dt_dv(i, j) - slope * v) / (u * v));
    }
  return worst;
}

// Max difference of a diagonal series between a grid and its refinement, on
// the coarse nodes.
double refinement_change(const std::vector<double>& coarse, const std::vector<double>& fine) {
  double m = 0;
  for (std::size_t j = 0; j < coarse.size(); ++j) m = std::max(m, std::abs(coarse[j] - fine[2 * j]));
  return m;
}

double ratio_order(double coarse, double fine) { return std::log2(coarse / fine); }

std::vector<double> to_vector(const std::vector<int>& x) { return {x.begin(), x.end()}; }

}  // namespace

Check check_rel(std::string name, std::string basis, double target, double measured, double tol) {
  const double err = std::abs(measured / target - 1.0);
  return make(std::move(name), std::move(basis), "rel", target, measured, tol, err <= tol);
}

Check check_abs(std::string name, std::string basis, double target, double measured, double tol) {
  return make(std::move(name), std::move(basis), "abs", target, measured, tol, std::abs(measured - target) <= tol);
}

Check check_less(std::string name, std::string basis, double measured, double bound) {
  return make(std::move(name), std::move(basis), "<", bound, measured, 0.0, measured < bound);
}

Check check_greater(std::string name, std::string basis, double measured, double bound) {
  return make(std::move(name), std::move(basis), ">", bound, measured, 0.0, measured > bound);
}

bool Criterion::pass() const {
  if (!error.empty() || checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

RunSet solve_all(const SolverConfig& cfg) {
  RunSet runs;
  runs.config = cfg;
  const ShockConfig base = cfg.shock_config();
  try {
    runs.main = run_shock_development(base);
  } catch (const std::exception& e) {
    runs.main_error = e.what();
    return runs;
  }
  // The companions use the eps the main run settled on, so that differences
  // between them reflect only the varied parameter.
  ShockConfig pinned = base;
  pinned.eps = runs.main->grid.eps;
  pinned.max_retries = 0;

  auto launch = [](ShockConfig c) {
    return std::async(std::launch::async, [c] { return run_shock_development(c); });
  };
  ShockConfig coarse = pinned, fine = pinned, half = pinned, perturbed = pinned, moving = pinned;
  coarse.n = cfg.n / 2;
  fine.n = cfg.n * 2;
  half.eps = pinned.eps / 2;
  perturbed.seed_y_slope = 0.1;
  moving.cusp.alpha0 = cfg.cusp.alpha0 + 0.05;
  moving.cusp.beta0 = cfg.cusp.beta0 - 0.05;
  moving.cusp.alpha_dot0.reset();

  std::vector<std::pair<std::optional<ShockSolution>*, std::future<ShockSolution>>> jobs;
  if (coarse.n >= 4) jobs.emplace_back(&runs.coarse, launch(coarse));
  jobs.emplace_back(&runs.fine, launch(fine));
  jobs.emplace_back(&runs.half_eps, launch(half));
  jobs.emplace_back(&runs.perturbed, launch(perturbed));
  jobs.emplace_back(&runs.moving, launch(moving));
  for (auto& [slot, fut] : jobs) {
    try {
      *slot = fut.get();
    } catch (const std::exception&) {
      // The criterion that needs this solve reports it as missing.
    }
  }
  return runs;
}

Criterion eos_identities(const SolverConfig& cfg) {
  return guarded(1, "EOS and thermodynamic identities", [&](Criterion& c) {
    const EosPtr eos = cfg.make_eos();
    double worst_sigma = 0, worst_volume = 0;
    for (double rho : sample_densities(*eos, cfg, 5)) {
      const double h = eos->h_tilde_of_rho(rho);
      const double mu = eos->mu_coefficient(eos->rho_tilde_of_rho(rho));
      const double ds = dsigma_dh(*eos, rho);
      worst_sigma = std::max(worst_sigma, std::abs(ds / (-2.0 * mu / (h * h * h)) - 1.0));

      // 3 v dv/dp + h d2v/dp2 = -(v^3 h^2 / eta^4) dSigma/dh, v = 1 / sigma.
      const double step = 1e-3 * rho;
      auto vol = [&](double r) { return 1.0 / eos->sigma_of_rho(r); };
      auto pres = [&](double r) { return eos->pressure(r); };
      const double v = vol(rho);
      const double v_r = numerics::central_diff4(vol, rho, step);
      const double v_rr = numerics::central_second_diff4(vol, rho, step);
      const double p_r = numerics::central_diff4(pres, rho, step);
      const double p_rr = numerics::central_second_diff4(pres, rho, step);
      const double dv_dp = v_r / p_r;
      const double d2v_dp2 = (v_rr * p_r - v_r * p_rr) / (p_r * p_r * p_r);
      const double eta2 = eos->dpressure(rho);
      const double lhs = 3.0 * v * dv_dp + h * d2v_dp2;
      const double rhs = -(v * v * v * h * h / (eta2 * eta2)) * ds;
      worst_volume = std::max(worst_volume, std::abs(lhs / rhs - 1.0));
    }
    c.checks.push_back(check_abs("dSigma/dh = -2 mu / h^3, worst relative error", "oracle", 0.0, worst_sigma, 1e-4));
    c.checks.push_back(check_abs("specific volume identity, worst relative error", "oracle", 0.0, worst_volume, 1e-4));

    RadiationEos rad;
    double worst_eta = 0, worst_g = 0;
    const double g_over_h = rad.big_g(1.0);
    for (double rho : {0.1, 0.5, 1.0, 4.0, 20.0}) {
      const Thermo th = rad.thermo(rad.rho_tilde_of_rho(rho));
      worst_eta = std::max(worst_eta, std::abs(th.eta2 * 3.0 - 1.0));
      const double big_h = th.h_tilde * th.h_tilde;
      worst_g = std::max(worst_g, std::abs(rad.big_g(big_h) / big_h / g_over_h - 1.0));
    }
    c.checks.push_back(check_abs("radiation eta^2 = 1/3, worst relative error", "analytic", 0.0, worst_eta, 1e-8));
    c.checks.push_back(check_abs("radiation G / H constant, worst relative spread", "analytic", 0.0, worst_g, 1e-8));
  });
}

Criterion jump_degeneracy(const SolverConfig& cfg) {
  return guarded(2, "degeneracy of J at coincidence", [&](Criterion& c) {
    const EosPtr eos = cfg.make_eos();
    double worst_low = 0, worst_mixed = 0, worst_fourth = 0;
    for (const RiemannPair& ahead : sample_pairs(cfg, 3)) {
      const PointState s = evaluate(*eos, ahead);
      const double scale = s.jump_scale();
      auto j_of = [&](double da, double db) {
        return jump_J(*eos, {ahead, {ahead.alpha + da, ahead.beta + db}}) / scale;
      };
      // Derivatives in alpha_plus from a least-squares polynomial through the
      // sampled values; J(0) = 0 so the constant is left out.
      std::vector<double> a, jv;
      for (int k = -8; k <= 8; ++k) {
        if (k == 0) continue;
        a.push_back(0.01 * k);
        jv.push_back(j_of(0.01 * k, 0.0));
      }
      const std::vector<int> powers{1, 2, 3, 4, 5, 6, 7, 8};
      const std::vector<double> cf = numerics::monomial_fit(a, jv, powers);
      worst_low = std::max({worst_low, std::abs(cf[0]), std::abs(2 * cf[1]), std::abs(6 * cf[2])});
      const double fourth_target = s.th.mu * s.th.mu / (8.0 * s.th.eta2);
      worst_fourth = std::max(worst_fourth, std::abs(24 * cf[3] / fourth_target - 1.0));

      const double h = 1e-3;
      const double mixed = (j_of(h, h) - j_of(h, -h) - j_of(-h, h) + j_of(-h, -h)) / (4 * h * h);
      worst_mixed = std::max(worst_mixed, std::abs(mixed - 1.0));
    }
    c.checks.push_back(check_less("max |d^k J / d alpha_+^k| / scale, k = 1..3", "analytic", worst_low, 1e-6));
    c.checks.push_back(check_abs("d2J / d alpha_+ d beta_+ against scale, worst relative error", "analytic", 0.0,
                                 worst_mixed, 1e-4));
    c.checks.push_back(check_abs("d4J / d alpha_+^4 against scale mu^2 / (8 eta^2), worst relative error",
                                 "analytic", 0.0, worst_fourth, 1e-3));
  });
}

Criterion cubic_jump_law(const SolverConfig& cfg) {
  return guarded(3, "cubic jump law", [&](Criterion& c) {
    const EosPtr eos = cfg.make_eos();
    const RiemannPair ahead{cfg.cusp.alpha0, cfg.cusp.beta0};
    const Thermo th = eos->thermo(0.5 * (ahead.alpha + ahead.beta));
    const double target = -th.mu * th.mu / (192.0 * th.eta2);
    std::vector<double> da, ratio;
    for (int k = 0; k < 8; ++k) {
      const double d = 0.002 * std::pow(2.0, k);
      da.push_back(d);
      ratio.push_back(solve_jump_increment(*eos, ahead, d) / (d * d * d));
    }
    const std::vector<double> fit = numerics::polyfit(da, ratio, 2);
    c.checks.push_back(check_rel("[beta] / [alpha]^3 as [alpha] -> 0", "analytic", target, fit[0], 0.10));
    if (cfg.eos.kind == "radiation")
      c.checks.push_back(check_rel("radiation cubic coefficient", "analytic", -1.0 / 144.0, fit[0], 0.10));
  });
}

Criterion inner_asymptotics(const RunSet& runs) {
  return guarded(4, "inner solver asymptotics", [&](Criterion& c) {
    const ShockSolution& s = need(runs.main, "the configured grid", runs);
    const ShockSolution& fine = need(runs.fine, "the refined grid", runs);
    const double c_main = inner_constant(s);
    const double c_fine = inner_constant(fine);
    c.checks.push_back(check_less("C in |t_v - (lambda/3kappa^2) v| <= C u v", "structural", c_main, 1e3));
    c.checks.push_back(check_rel("C under grid doubling", "structural", c_main, c_fine, 0.10));

    const CuspData& cusp = s.model.cusp();
    const std::vector<double> df = sample_derivative(s.curve.f, s.grid.delta());
    c.checks.push_back(check_rel("df/dv / v as v -> 0", "analytic", cusp.lambda / (3 * cusp.kappa * cusp.kappa),
                                 extrapolate_to_zero(s.curve.v, scaled(s.curve, df, 1)), 0.02));
  });
}

Criterion outer_fixed_point(const RunSet& runs) {
  return guarded(5, "outer fixed point and hatted limits", [&](Criterion& c) {
    auto hatted = [&](const ShockSolution& s, const std::string& tag) {
      const ShockCurve& k = s.curve;
      const CuspData& cusp = s.model.cusp();
      const double f0 = cusp.lambda / (6 * cusp.kappa * cusp.kappa);
      c.checks.push_back(check_rel(tag + "f_hat(0)", "analytic", f0, extrapolate_to_zero(k.v, k.f_hat), 0.05));
      c.checks.push_back(check_rel(tag + "g_hat(0)", "analytic", s.model.c_plus0() * f0,
                                   extrapolate_to_zero(k.v, k.g_hat), 0.05));
      c.checks.push_back(check_abs(tag + "y(0)", "analytic", -1.0, extrapolate_to_zero(k.v, k.y), 0.02));
      c.checks.push_back(check_rel(tag + "beta_hat_plus(0)", "analytic", f0 * cusp.dbeta_dt0,
                                   extrapolate_to_zero(k.v, k.beta_hat), 0.10));
      const double a0 = f0 * s.model.a_tilde0();
      const double alpha_fit = extrapolate_to_zero(k.v, k.alpha_hat);
      if (std::abs(a0) < 1e-14)
        c.checks.push_back(check_abs(tag + "alpha_hat_plus(0), zero at a resting cusp", "analytic", 0.0, alpha_fit,
                                     0.02 * s.model.alpha_dot0()));
      else
        c.checks.push_back(check_rel(tag + "alpha_hat_plus(0)", "analytic", a0, alpha_fit, 0.10));
      c.checks.push_back(check_abs(tag + "delta_hat(0)", "analytic", 0.0, extrapolate_to_zero(k.v, k.delta_hat),
                                   10 * s.grid.delta()));
    };
    const ShockSolution& s = need(runs.main, "the configured run", runs);
    c.checks.push_back(check_less("outer distance at stop", "structural", s.outer_history.back(),
                                  runs.config.tol_outer));
    hatted(s, "");
    hatted(need(runs.moving, "the moving-cusp companion", runs), "moving cusp: ");
  });
}

Criterion shock_geometry(const RunSet& runs) {
  return guarded(6, "shock geometry and determinism", [&](Criterion& c) {
    const ShockSolution& s = need(runs.main, "the configured run", runs);
    const ShockCurve& k = s.curve;
    const BarotropicEos& eos = s.model.eos();
    std::vector<double> ratio(k.size(), 0.0), ahead(k.size(), 0.0), behind(k.size(), 0.0);
    double worst_past = -INFINITY, min_margin = INFINITY;
    for (std::size_t j = 1; j < k.size(); ++j) {
      const double t_star = s.model.singular_boundary(k.v[j] * k.y[j]);
      worst_past = std::max(worst_past, k.f[j] / t_star);
      ratio[j] = k.f[j] / t_star;
      const double speed = s.model.c_plus0() + k.speed_excess[j];
      ahead[j] = (speed - evaluate(eos, k.pairs[j].ahead).c_plus) / k.v[j];
      behind[j] = (evaluate(eos, k.pairs[j].behind).c_plus - speed) / k.v[j];
      min_margin = std::min({min_margin, ahead[j], behind[j]});
    }
    const double kappa = s.model.cusp().kappa;
    c.checks.push_back(check_less("max f / t*(z) over (0, eps]", "structural", worst_past, 1.0));
    c.checks.push_back(check_rel("f / t*(z) as v -> 0", "analytic", 1.0 / 3.0, extrapolate_to_zero(k.v, ratio), 0.10));
    c.checks.push_back(check_greater("min determinism margin / v", "structural", min_margin, 0.0));
    c.checks.push_back(check_rel("(V - c_plus ahead) / v as v -> 0", "analytic", kappa, extrapolate_to_zero(k.v, ahead), 0.15));
    c.checks.push_back(check_rel("(c_plus behind - V) / v as v -> 0", "analytic", kappa, extrapolate_to_zero(k.v, behind), 0.15));
  });
}

Criterion jump_residuals(const RunSet& runs) {
  return guarded(7, "jump conditions on the converged shock", [&](Criterion& c) {
    const ShockSolution& s = need(runs.main, "the configured run", runs);
    const ShockCurve& k = s.curve;
    const double d = s.grid.delta();
    std::vector<double> excess(k.size());
    for (int j = 0; j <= s.grid.n; ++j) excess[j] = s.inner.fields.r_excess(j, j);
    // df/dv V - dg/dv with the c_plus0 parts cancelled analytically.
    const std::vector<double> df = sample_derivative(k.f, d);
    const std::vector<double> dex = sample_derivative(excess, d);
    double worst = 0;
    for (std::size_t j = 1; j < k.size(); ++j) worst = std::max(worst, std::abs(k.speed_excess[j] * df[j] - dex[j]));
    c.checks.push_back(check_less("max |J| / scale", "structural", max_abs(k.jump_residual), 1e-10));
    c.checks.push_back(check_less("max |df/dv V - dg/dv|", "structural", worst, 5 * d * d));
  });
}

Criterion grid_convergence(const RunSet& runs) {
  return guarded(8, "grid convergence", [&](Criterion& c) {
    c.checks.push_back(check_greater("grid intervals n", "resolution", runs.config.n, 15.5));
    const ShockSolution& coarse = need(runs.coarse, "the coarse grid", runs);
    const ShockSolution& s = need(runs.main, "the configured grid", runs);
    const ShockSolution& fine = need(runs.fine, "the refined grid", runs);
    const double r0 = characteristic_residuals(coarse.inner.fields, coarse.model.eos()).max();
    const double r1 = characteristic_residuals(s.inner.fields, s.model.eos()).max();
    const double r2 = characteristic_residuals(fine.inner.fields, fine.model.eos()).max();
    c.checks.push_back(check_greater("residual order, n/2 -> n", "structural", ratio_order(r0, r1), 1.8));
    c.checks.push_back(check_greater("residual order, n -> 2n", "structural", ratio_order(r1, r2), 1.8));
    const double f01 = refinement_change(coarse.curve.f, s.curve.f);
    const double f12 = refinement_change(s.curve.f, fine.curve.f);
    const double g01 = refinement_change(coarse.curve.g, s.curve.g);
    const double g12 = refinement_change(s.curve.g, fine.curve.g);
    c.checks.push_back(check_greater("order of the f change under refinement", "structural", ratio_order(f01, f12), 1.8));
    c.checks.push_back(check_greater("order of the g change under refinement", "structural", ratio_order(g01, g12), 1.8));
  });
}

Criterion convergence_structure(const RunSet& runs) {
  return guarded(9, "contraction of the iterations", [&](Criterion& c) {
    const ShockSolution& s = need(runs.main, "the configured run", runs);
    const ShockSolution& half = need(runs.half_eps, "the half-eps run", runs);
    const double inner = s.inner.contraction_ratio();
    const double inner_half = half.inner.contraction_ratio();
    const double outer = s.outer_ratio();
    const double outer_half = half.outer_ratio();
    c.checks.push_back(check_less("inner ratio at eps", "structural", inner, 1.0));
    c.checks.push_back(check_less("inner ratio at eps/2, below 0.95 x ratio at eps", "structural", inner_half, 0.95 * inner));
    c.checks.push_back(check_less("outer ratio at eps", "structural", outer, 1.0));
    c.checks.push_back(check_less("outer ratio at eps/2, below 0.95 x ratio at eps", "structural", outer_half, 0.95 * outer));
    const ShockSolution& p = need(runs.perturbed, "the perturbed start", runs);
    c.checks.push_back(check_less("distance after a perturbed start", "structural",
                                  boundary_distance(p.boundary, s.boundary, s.grid.delta()),
                                  5 * runs.config.tol_outer));
  });
}

Criterion blowup_signature(const RunSet& runs) {
  return guarded(10, "square-root signature behind the incoming characteristic", [&](Criterion& c) {
    const ShockSolution& s = need(runs.main, "the configured run", runs);
    const FieldGrid& f = s.inner.fields;
    const int n = s.grid.n;
    for (int i : {n / 4, n / 2, 3 * n / 4}) {
      std::vector<double> v, dt, da;
      for (int j = 1; j <= i; ++j) {
        v.push_back(s.grid.v(j));
        dt.push_back(f.t(i, j) - f.t(i, 0));
        da.push_back(f.alpha(i, j) - f.alpha(i, 0));
      }
      const auto window = numerics::smallest_decade(v);
      std::vector<double> wv, wt, wa;
      for (std::size_t k : window) {
        wv.push_back(v[k]);
        wt.push_back(dt[k]);
        wa.push_back(da[k]);
      }
      const double u = s.grid.u(i);
      const std::string line = "u = " + std::to_string(i) + " delta: ";
      const std::vector<int> powers{1, 2, 3};
      c.checks.push_back(check_abs(line + "exponent of t - t(u,0)", "analytic", 2.0,
                                   numerics::power_law_exponent(wv, wt), 0.05));
      c.checks.push_back(check_abs(line + "exponent of alpha - alpha(u,0)", "analytic", 2.0,
                                   numerics::power_law_exponent(wv, wa), 0.1));
      const std::vector<double> ct = numerics::monomial_fit(wv, wt, powers);
      const std::vector<double> ca = numerics::monomial_fit(wv, wa, powers);
      c.checks.push_back(check_less(line + "linear / quadratic scale, t", "analytic",
                                    std::abs(ct[0]) / (std::abs(ct[1]) * u), 1e-3));
      c.checks.push_back(check_less(line + "linear / quadratic scale, alpha", "analytic",
                                    std::abs(ca[0]) / (std::abs(ca[1]) * u), 1e-3));
    }
  });
}

bool DiagnosticsReport::all_pass() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const Criterion& c) { return c.pass(); });
}

std::vector<int> DiagnosticsReport::failed() const {
  std::vector<int> out;
  for (const Criterion& c : criteria)
    if (!c.pass()) out.push_back(c.id);
  return out;
}

nlohmann::ordered_json DiagnosticsReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["mode"] = mode;
  doc["pass"] = all_pass();
  doc["summary"] = summary;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const Criterion& c : criteria) {
    nlohmann::ordered_json entry;
    entry["id"] = c.id;
    entry["title"] = c.title;
    entry["pass"] = c.pass();
    if (!c.error.empty()) entry["error"] = c.error;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const Check& k : c.checks)
      checks.push_back({{"name", k.name},
                        {"basis", k.basis},
                        {"relation", k.relation},
                        {"target", k.target},
                        {"measured", k.measured},
                        {"tolerance", k.tolerance},
                        {"pass", k.pass}});
    entry["checks"] = checks;
    list.push_back(entry);
  }
  doc["criteria"] = list;
  doc["histories"] = histories;
  return doc;
}

void print_summary(std::ostream& os, const DiagnosticsReport& report) {
  for (const Criterion& c : report.criteria) {
    os << "criterion " << c.id << ' ' << (c.pass() ? "PASS" : "FAIL") << ' ' << c.title << '\n';
    if (c.pass()) continue;
    if (!c.error.empty()) os << "    error: " << c.error << '\n';
    for (const Check& k : c.checks)
      if (!k.pass)
        os << "    " << k.name << ": measured " << k.measured << ", target " << k.target << " (" << k.relation
           << (k.tolerance > 0 ? ", tolerance " + std::to_string(k.tolerance) : std::string()) << ")\n";
  }
}

bool failures_match(const DiagnosticsReport& report, std::vector<int> expected) {
  std::sort(expected.begin(), expected.end());
  expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
  std::vector<int> failed = report.failed();
  std::sort(failed.begin(), failed.end());
  return failed == expected;
}

DiagnosticsReport verify_report(const SolverConfig& cfg) {
  DiagnosticsReport r;
  r.mode = "verify";
  r.criteria = {eos_identities(cfg), jump_degeneracy(cfg), cubic_jump_law(cfg)};
  r.summary["eos"] = cfg.eos.kind;
  r.summary["seed"] = cfg.seed;
  return r;
}

DiagnosticsReport full_report(const RunSet& runs) {
  DiagnosticsReport r;
  r.mode = "run";
  const SolverConfig& cfg = runs.config;
  r.criteria = {eos_identities(cfg),       jump_degeneracy(cfg),     cubic_jump_law(cfg),
                inner_asymptotics(runs),   outer_fixed_point(runs),  shock_geometry(runs),
                jump_residuals(runs),      grid_convergence(runs),   convergence_structure(runs),
                blowup_signature(runs)};
  r.summary["eos"] = cfg.eos.kind;
  r.summary["eps_requested"] = cfg.eps;
  r.summary["n"] = cfg.n;
  r.summary["seed"] = cfg.seed;
  if (runs.main) {
    const ShockSolution& s = *runs.main;
    r.summary["eps"] = s.grid.eps;
    r.summary["retries"] = s.retries;
    r.summary["outer_steps"] = s.outer_history.size();
    r.histories["outer"] = s.outer_history;
    r.histories["inner_ratios"] = s.inner_ratios;
    r.histories["final_inner"] = s.inner.history;
    r.histories["final_linear_sweeps"] = to_vector(s.inner.linear_iterations);
  } else {
    r.summary["error"] = runs.main_error;
  }
  nlohmann::ordered_json grids = nlohmann::ordered_json::array();
  for (const auto* run : {&runs.coarse, &runs.main, &runs.fine})
    if (*run)
      grids.push_back({{"n", (*run)->grid.n},
                       {"delta", (*run)->grid.delta()},
                       {"residual", characteristic_residuals((*run)->inner.fields, (*run)->model.eos()).max()}});
  r.histories["grid_refinement"] = grids;
  if (runs.half_eps)
    r.histories["half_eps"] = {{"eps", runs.half_eps->grid.eps},
                               {"inner_ratio", runs.half_eps->inner.contraction_ratio()},
                               {"outer_ratio", runs.half_eps->outer_ratio()},
                               {"outer", runs.half_eps->outer_history}};
  return r;
}

}  // namespace shockdev
