#include "shockdev/free_boundary.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "shockdev/errors.hpp"

namespace shockdev {

namespace {

double extrapolate_quadratic(double q1, double q2, double q3) { return 3 * q1 - 3 * q2 + q3; }

void check_floor(const StateAheadModel& model, double f_hat, double v, double y) {
  if (!model.in_box(v * v * f_hat, v * y))
    throw OutOfBox("identification left the model box at v = " + std::to_string(v));
}

}  // namespace

double identification_residual(const StateAheadModel& model, double f_hat, double delta_hat, double v,
                               double y, double v_floor) {
  const Poly2D& r = model.poly(Field::r);
  double sum = 0.0;
  if (v < v_floor) {
    for (int a = 0; a <= r.degree(); ++a)
      for (int b = 0; a + b <= r.degree(); ++b) {
        if ((a == 0 && b == 0) || (a == 1 && b == 0)) continue;
        const double c = r.coeff(a, b);
        if (c == 0.0) continue;
        const int p = 2 * a + b - 3;
        if (p < 0) throw InconsistentCusp("radial model has a term below cubic order on the shock");
        sum += c * std::pow(v, p) * std::pow(f_hat, a) * std::pow(y, b);
      }
    return delta_hat - sum;
  }
  check_floor(model, f_hat, v, y);
  // The dropped constant and c_plus0 t terms cancel exactly against g.
  sum = model.radial_excess(v * v * f_hat, v * y);
  return delta_hat - sum / (v * v * v);
}

double identification_slope(const StateAheadModel& model, double f_hat, double v, double y,
                            double v_floor) {
  const Poly2D& r = model.poly(Field::r);
  if (v < v_floor) {
    double sum = 0.0;
    for (int a = 0; a <= r.degree(); ++a)
      for (int b = 1; a + b <= r.degree(); ++b) {
        const double c = r.coeff(a, b);
        if (c == 0.0) continue;
        sum += c * b * std::pow(v, 2 * a + b - 3) * std::pow(f_hat, a) * std::pow(y, b - 1);
      }
    return -sum;
  }
  check_floor(model, f_hat, v, y);
  return -model.eval(Field::r, v * v * f_hat, v * y, 0, 1) / (v * v);
}

double solve_identification(const StateAheadModel& model, double f_hat, double delta_hat, double v,
                            double y_guess, double v_floor, const IdentificationOptions& opt) {
  const CuspData& c = model.cusp();
  const double target = opt.tol * c.lambda / c.kappa;
  auto resid = [&](double y) { return identification_residual(model, f_hat, delta_hat, v, y, v_floor); };

  double lo = y_guess - opt.bracket, hi = y_guess + opt.bracket;
  double f_lo = resid(lo), f_hi = resid(hi);
  if (f_lo * f_hi > 0) throw NoRoot("identification residual does not change sign around y = " +
                                    std::to_string(y_guess));
  double y = y_guess;
  double fy = resid(y);
  std::vector<double> history;
  int polish = 0;
  for (int it = 0; it < opt.max_iter; ++it) {
    history.push_back(std::abs(fy));
    // Past the tolerance, keep taking Newton steps while they still reduce
    // the residual, so the root is reproducible to rounding.
    if (std::abs(fy) < target && (polish == 2 || fy == 0.0)) return y;
    if (std::abs(fy) < target) ++polish;
    if ((fy < 0) == (f_lo < 0)) {
      lo = y;
      f_lo = fy;
    } else {
      hi = y;
      f_hi = fy;
    }
    const double slope = identification_slope(model, f_hat, v, y, v_floor);
    double next = y - fy / slope;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (next == y) break;
    const double f_next = resid(next);
    if (polish > 0 && std::abs(f_next) >= std::abs(fy)) return y;
    y = next;
    fy = f_next;
  }
  if (std::abs(fy) < target) return y;
  throw NonConvergence("identification equation did not converge at v = " + std::to_string(v), history);
}

double boundary_distance(const BoundaryFunctions& a, const BoundaryFunctions& b, double delta) {
  const std::size_t m = a.y.size();
  double dist = 0.0;
  std::vector<double> d_beta(m);
  for (std::size_t j = 0; j < m; ++j) {
    dist = std::max({dist, std::abs(a.y[j] - b.y[j]), std::abs(a.v_hat[j] - b.v_hat[j])});
    d_beta[j] = a.beta_hat_plus[j] - b.beta_hat_plus[j];
  }
  for (double x : sample_derivative(d_beta, delta)) dist = std::max(dist, std::abs(x));
  return dist;
}

JumpNode jump_update(const StateAheadModel& model, double f, double z, double alpha_plus,
                     const JumpSolveOptions& opt) {
  const BarotropicEos& eos = model.eos();
  const CuspData& cusp = model.cusp();
  JumpNode out;
  out.pair = {model.cusp_pair(), model.cusp_pair()};
  if (f == 0.0 && z == 0.0 && alpha_plus == cusp.alpha0) return out;  // coincidence at the cusp
  const double da_ahead = model.eval_offset(Field::alpha, f, z);
  const double db_ahead = model.eval_offset(Field::beta, f, z);
  const RiemannPair ahead{cusp.alpha0 + da_ahead, cusp.beta0 + db_ahead};
  out.d_alpha = (alpha_plus - cusp.alpha0) - da_ahead;
  out.d_beta = solve_jump_increment(eos, ahead, out.d_alpha, opt);
  const JumpSegment seg(eos, ahead, out.d_alpha, out.d_beta);
  out.pair = {ahead, {alpha_plus, cusp.beta0 + (db_ahead + out.d_beta)}};
  out.beta_offset = db_ahead + out.d_beta;
  out.speed_excess = seg.speed_excess(eos, model.cusp_state(), da_ahead, db_ahead);
  out.residual = std::abs(seg.jump_function()) / seg.ahead().jump_scale();
  return out;
}

OuterStep outer_iterate(const BoundaryFunctions& bf, const OuterContext& ctx) {
  const StateAheadModel& model = *ctx.model;
  const CuspData& cusp = model.cusp();
  const TriGrid& g = ctx.grid;
  const int n = g.n;
  if (n < 4) throw ConfigError("the outer iteration needs n >= 4");
  const double v_floor = ctx.inner.v_floor_fraction * g.delta();
  const double c0 = model.c_plus0();
  const double lead = cusp.lambda / (6 * cusp.kappa * cusp.kappa);

  OuterStep step;
  step.inner = solve_fixed_bvp(model, *ctx.init, bf, g, ctx.inner);
  const FieldGrid& fg = step.inner.fields;

  ShockCurve& sc = step.curve;
  const auto size = static_cast<std::size_t>(n + 1);
  for (auto* vec : {&sc.v, &sc.f, &sc.g, &sc.y, &sc.alpha_plus, &sc.beta_plus, &sc.speed_excess, &sc.f_hat,
                    &sc.g_hat, &sc.delta_hat, &sc.alpha_hat, &sc.beta_hat, &sc.v_hat, &sc.d_alpha,
                    &sc.d_beta, &sc.jump_residual})
    vec->assign(size, 0.0);
  sc.pairs.assign(size, JumpPair{model.cusp_pair(), model.cusp_pair()});

  for (int j = 0; j <= n; ++j) {
    const double v = g.v(j);
    sc.v[j] = v;
    sc.f[j] = fg.t(j, j);
    sc.g[j] = fg.dr(j, j);
    sc.alpha_plus[j] = fg.alpha(j, j);
    if (j == 0) {
      sc.y[0] = -1.0;
      sc.beta_plus[0] = cusp.beta0;
      continue;
    }
    const double v2 = v * v;
    sc.f_hat[j] = sc.f[j] / v2;
    sc.g_hat[j] = sc.g[j] / v2;
    sc.delta_hat[j] = fg.r_excess(j, j) / (v2 * v);
    sc.alpha_hat[j] = (fg.alpha(j, j) - fg.alpha(j, 0)) / v2;
    const double guess = j == 1 ? -1.0 : sc.y[j - 1];
    const double y = solve_identification(model, sc.f_hat[j], sc.delta_hat[j], v, guess, v_floor, ctx.ident);
    sc.y[j] = y;

    const JumpNode jn = jump_update(model, sc.f[j], v * y, sc.alpha_plus[j], ctx.jump);
    sc.d_alpha[j] = jn.d_alpha;
    sc.d_beta[j] = jn.d_beta;
    sc.pairs[j] = jn.pair;
    sc.beta_plus[j] = jn.pair.behind.beta;
    sc.beta_hat[j] = jn.beta_offset / v2;
    sc.speed_excess[j] = jn.speed_excess;
    sc.jump_residual[j] = jn.residual;
    sc.v_hat[j] = (sc.speed_excess[j] - 0.5 * cusp.kappa * (1 + y) * v) / v2;
  }
  sc.f_hat[0] = lead;
  sc.g_hat[0] = lead * c0;
  sc.alpha_hat[0] = lead * model.a_tilde0();
  sc.beta_hat[0] = lead * cusp.dbeta_dt0;
  sc.delta_hat[0] = extrapolate_quadratic(sc.delta_hat[1], sc.delta_hat[2], sc.delta_hat[3]);
  sc.v_hat[0] = extrapolate_quadratic(sc.v_hat[1], sc.v_hat[2], sc.v_hat[3]);

  step.next.v = sc.v;
  step.next.y = sc.y;
  step.next.beta_hat_plus = sc.beta_hat;
  step.next.v_hat = sc.v_hat;
  return step;
}

double ShockSolution::outer_ratio() const {
  double log_sum = 0.0;
  int count = 0;
  for (std::size_t k = 1; k < outer_history.size(); ++k) {
    if (outer_history[k] < 1e-14 || outer_history[k - 1] == 0.0) break;
    log_sum += std::log(outer_history[k] / outer_history[k - 1]);
    ++count;
  }
  return count == 0 ? 0.0 : std::exp(log_sum / count);
}

ShockSolution run_shock_development(const ShockConfig& cfg) {
  if (!cfg.eos) throw ConfigError("no equation of state configured");
  if (cfg.max_outer < 1) throw ConfigError("max_outer must be positive");
  for (int attempt = 0;; ++attempt) {
    const double eps = cfg.eps / std::pow(2.0, attempt);
    const bool last = attempt >= cfg.max_retries;
    std::vector<double> history;
    try {
      StateAheadModel model = synthesize_model(cfg.cusp, cfg.eos, cfg.degree, eps, cfg.overrides);
      InitialData init = initial_data(model, eps, cfg.n);
      OuterContext ctx;
      ctx.model = &model;
      ctx.init = &init;
      ctx.grid = TriGrid(eps, cfg.n);
      ctx.inner = cfg.inner;

      BoundaryFunctions bf = BoundaryFunctions::seed(model, ctx.grid);
      for (int j = 0; j <= cfg.n; ++j) bf.y[j] += cfg.seed_y_slope * bf.v[j];

      std::vector<double> inner_ratios;
      for (int m = 0; m < cfg.max_outer; ++m) {
        OuterStep step = outer_iterate(bf, ctx);
        inner_ratios.push_back(step.inner.contraction_ratio());
        const double dist = boundary_distance(step.next, bf, ctx.grid.delta());
        history.push_back(dist);
        bf = step.next;
        if (dist < cfg.tol_outer) {
          // model and init are captured by reference in ctx; move them last.
          ShockSolution sol{std::move(model), std::move(init), ctx.grid, std::move(bf), std::move(step.inner),
                            std::move(step.curve), std::move(history), std::move(inner_ratios), cfg.eps,
                            attempt};
          return sol;
        }
      }
      throw NonConvergence("outer iteration did not converge at eps = " + std::to_string(eps), history);
    } catch (const NonConvergence&) {
      if (last) throw;
    } catch (const SingularGamma&) {
      if (last) throw;
    } catch (const OutOfBox&) {
      if (last) throw;
    } catch (const LeftBox&) {
      if (last) throw;
    } catch (const NoRoot&) {
      if (last) throw;
    }
  }
}

void write_shock_csv(std::ostream& os, const ShockCurve& c, double c_plus0) {
  const auto old_precision = os.precision(17);
  os << "v,f,g,V,y,alpha_plus,beta_plus,f_hat,g_hat,delta_hat,V_hat\n";
  for (std::size_t j = 0; j < c.size(); ++j)
    os << c.v[j] << ',' << c.f[j] << ',' << c.g[j] << ',' << c_plus0 + c.speed_excess[j] << ',' << c.y[j]
       << ',' << c.alpha_plus[j] << ',' << c.beta_plus[j] << ',' << c.f_hat[j] << ',' << c.g_hat[j] << ','
       << c.delta_hat[j] << ',' << c.v_hat[j] << '\n';
  os.precision(old_precision);
}

}  // namespace shockdev
