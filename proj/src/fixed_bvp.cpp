#include "shockdev/fixed_bvp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "shockdev/errors.hpp"

namespace shockdev {

TriGrid::TriGrid(double eps_, int n_) : eps(eps_), n(n_) {
  if (!(eps > 0)) throw ConfigError("grid needs eps > 0");
  if (n < 2) throw ConfigError("grid needs n >= 2");
}

BoundaryFunctions BoundaryFunctions::seed(const StateAheadModel& model, const TriGrid& grid) {
  const CuspData& c = model.cusp();
  BoundaryFunctions bf;
  bf.v.resize(grid.n + 1);
  for (int j = 0; j <= grid.n; ++j) bf.v[j] = grid.v(j);
  bf.y.assign(grid.n + 1, -1.0);
  bf.beta_hat_plus.assign(grid.n + 1, c.lambda / (6.0 * c.kappa * c.kappa) * c.dbeta_dt0);
  bf.v_hat.assign(grid.n + 1, 0.0);
  return bf;
}

double BoundaryFunctions::speed_excess(const StateAheadModel& model, int j) const {
  return 0.5 * model.cusp().kappa * (1.0 + y[j]) * v[j] + v[j] * v[j] * v_hat[j];
}

std::vector<double> sample_derivative(const std::vector<double>& f, double step) {
  const std::size_t m = f.size();
  std::vector<double> d(m, 0.0);
  if (m < 2) return d;
  if (m == 2) {
    d[0] = d[1] = (f[1] - f[0]) / step;
    return d;
  }
  d[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * step);
  d[m - 1] = (3 * f[m - 1] - 4 * f[m - 2] + f[m - 3]) / (2 * step);
  for (std::size_t k = 1; k + 1 < m; ++k) d[k] = (f[k + 1] - f[k - 1]) / (2 * step);
  return d;
}

// ---------------------------------------------------------------- linear t

namespace {

struct LinearCoefficients {
  NodeArray ek, el;  // exp(K), exp(L)
};

// K(u, v) = int_0^v (-nu)(u, v') dv' and L(u, v) = int_v^u mu(u', v) du', trapezoid.
LinearCoefficients exponent_tables(const TriGrid& g, const NodeArray& mu, const NodeArray& nu) {
  const double d = g.delta();
  NodeArray k(g), l(g);
  for (int i = 0; i <= g.n; ++i)
    for (int j = 1; j <= i; ++j) k(i, j) = k(i, j - 1) - 0.5 * d * (nu(i, j - 1) + nu(i, j));
  for (int j = 0; j <= g.n; ++j)
    for (int i = j + 1; i <= g.n; ++i) l(i, j) = l(i - 1, j) + 0.5 * d * (mu(i - 1, j) + mu(i, j));
  LinearCoefficients c{NodeArray(g), NodeArray(g)};
  for (int i = 0; i <= g.n; ++i)
    for (int j = 0; j <= i; ++j) {
      c.ek(i, j) = std::exp(k(i, j));
      c.el(i, j) = std::exp(l(i, j));
    }
  return c;
}

void reconstruct_t(const TriGrid& g, const std::vector<double>& h, LinearTSolution& s) {
  const double d = g.delta();
  s.t = NodeArray(g);
  for (int i = 0; i <= g.n; ++i) {
    s.t(i, 0) = h[i];
    for (int j = 1; j <= i; ++j) s.t(i, j) = s.t(i, j - 1) + 0.5 * d * (s.dt_dv(i, j - 1) + s.dt_dv(i, j));
  }
}

}  // namespace

LinearTSolution solve_linear_t(const TriGrid& g, const NodeArray& mu, const NodeArray& nu,
                               const std::vector<double>& gamma_inv, const std::vector<double>& h,
                               const std::vector<double>& dh, const LinearTOptions& opt,
                               const LinearTSolution* warm) {
  const double d = g.delta();
  const int n = g.n;
  const LinearCoefficients c = exponent_tables(g, mu, nu);
  LinearTSolution s;
  s.dt_du = NodeArray(g);
  s.dt_dv = warm && !warm->dt_dv.empty() ? warm->dt_dv : NodeArray(g);
  std::vector<double> a(n + 1, 0.0);
  double floor = 0.0;  // values below this are compared in absolute terms

  for (int sweep = 0; sweep < opt.max_iter; ++sweep) {
    double change = 0.0;
    double rel_change = 0.0;
    auto update = [&](double& slot, double value) {
      const double diff = std::abs(value - slot);
      change = std::max(change, diff);
      if (diff > 0) rel_change = std::max(rel_change, diff / (std::abs(value) + floor));
      slot = value;
    };
    // t_u from the current t_v, integrating in v from the edge v = 0.
    for (int i = 0; i <= n; ++i) {
      double integral = 0.0;
      double prev = c.ek(i, 0) * mu(i, 0) * s.dt_dv(i, 0);
      for (int j = 0; j <= i; ++j) {
        if (j > 0) {
          const double cur = c.ek(i, j) * mu(i, j) * s.dt_dv(i, j);
          integral += 0.5 * d * (prev + cur);
          prev = cur;
        }
        update(s.dt_du(i, j), (dh[i] - integral) / c.ek(i, j));
      }
    }
    // Diagonal condition t_v = t_u / gamma, then t_v by integrating in u from the diagonal.
    for (int j = 1; j <= n; ++j) a[j] = gamma_inv[j] * s.dt_du(j, j);
    for (int j = 0; j <= n; ++j) {
      double integral = 0.0;
      double prev = c.el(j, j) * nu(j, j) * s.dt_du(j, j);
      for (int i = j; i <= n; ++i) {
        if (i > j) {
          const double cur = c.el(i, j) * nu(i, j) * s.dt_du(i, j);
          integral += 0.5 * d * (prev + cur);
          prev = cur;
        }
        update(s.dt_dv(i, j), (a[j] + integral) / c.el(i, j));
      }
    }
    double scale = 0.0;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= i; ++j) scale = std::max({scale, std::abs(s.dt_du(i, j)), std::abs(s.dt_dv(i, j))});
    floor = 1e-12 * scale;
    s.history.push_back(change);
    if (rel_change <= opt.tol) {
      reconstruct_t(g, h, s);
      return s;
    }
  }
  throw NonConvergence("linear equation for t did not converge", s.history);
}

LinearTSolution solve_linear_t_marching(const TriGrid& g, const NodeArray& mu, const NodeArray& nu,
                                        const std::vector<double>& gamma_inv,
                                        const std::vector<double>& h, const std::vector<double>& dh) {
  const double d = g.delta();
  const int n = g.n;
  const LinearCoefficients c = exponent_tables(g, mu, nu);
  LinearTSolution s;
  s.dt_du = NodeArray(g);
  s.dt_dv = NodeArray(g);
  // row_sum[i]: trapezoid sum over j' < j of exp(K) mu t_v along row i, without the endpoint half.
  std::vector<double> row_sum(n + 1, 0.0);
  for (int j = 0; j <= n; ++j) {
    double level_sum = 0.0;  // same along the level v = v_j for exp(L) nu t_u
    for (int i = j; i <= n; ++i) {
      // t_u = xp - omega t_v with the unknown endpoint term split off.
      const double omega = j > 0 ? 0.5 * d * mu(i, j) : 0.0;
      const double xp = (dh[i] - row_sum[i]) / c.ek(i, j);
      double tu, tv;
      if (i == j) {
        const double gi = j > 0 ? gamma_inv[j] : 0.0;
        tu = xp / (1.0 + omega * gi);
        tv = gi * tu;
      } else {
        // t_v = yq + xi t_u.
        const double xi = 0.5 * d * nu(i, j);
        const double a_j = s.dt_dv(j, j);
        const double yq = (a_j + level_sum) / c.el(i, j);
        tu = (xp - omega * yq) / (1.0 + omega * xi);
        tv = yq + xi * tu;
      }
      s.dt_du(i, j) = tu;
      s.dt_dv(i, j) = tv;
      // Extend the level sum past node i (half weight at the start node, full afterwards).
      const double term = c.el(i, j) * nu(i, j) * tu;
      level_sum += (i == j ? 0.5 : 1.0) * d * term;
    }
    for (int i = j; i <= n; ++i) {
      const double term = c.ek(i, j) * mu(i, j) * s.dt_dv(i, j);
      row_sum[i] += (j == 0 ? 0.5 : 1.0) * d * term;
    }
  }
  reconstruct_t(g, h, s);
  return s;
}

// ------------------------------------------------------------------ gamma

double gamma_inverse(const BoundaryFunctions& bf, double alpha_diag, const StateAheadModel& model,
                     const TriGrid& grid, int j, double v_floor) {
  const double v = grid.v(j);
  const CuspData& c = model.cusp();
  if (v < v_floor) {
    if (v == 0.0) return std::numeric_limits<double>::infinity();
    return (model.c_plus0() - model.c_minus0()) / (c.kappa * v);
  }
  const double d_alpha = alpha_diag - c.alpha0;
  const double d_beta = v * v * bf.beta_hat_plus[j];
  const PointState behind = evaluate(model.eos(), {c.alpha0 + d_alpha, c.beta0 + d_beta});
  // c_plus - V as (c_plus - c_plus0) - (V - c_plus0), both small and accurate.
  const double gap_plus = plus_speed_offset(model.eos(), model.cusp_state(), d_alpha, d_beta) -
                          bf.speed_excess(model, j);
  const double speed = model.c_plus0() + bf.speed_excess(model, j);
  const double gap_minus = speed - behind.c_minus;
  if (!(gap_plus > 0) || !(gap_minus > 0))
    throw SingularGamma("shock speed outside (c_minus, c_plus) behind the shock at v = " + std::to_string(v));
  return gap_minus / gap_plus;
}

// ------------------------------------------------------------- fixed BVP

double FixedBvpResult::contraction_ratio() const {
  double log_sum = 0.0;
  int count = 0;
  for (std::size_t k = 1; k < history.size(); ++k) {
    if (history[k] < 1e-11 || history[k - 1] == 0.0) break;
    log_sum += std::log(history[k] / history[k - 1]);
    ++count;
  }
  if (count == 0) return history.size() >= 2 && history[0] > 0 ? history[1] / history[0] : 0.0;
  return std::exp(log_sum / count);
}

namespace {

struct Workspace {
  std::vector<PointState> states;
  const PointState& at(const TriGrid& g, int i, int j) const { return states[g.idx(i, j)]; }
};

// alpha_u and beta_v on the grid from the stored fields. alpha_v and beta_u are
// known exactly from the previous update and are used on the diagonal to
// split the total derivative along the shock.
void grid_derivatives(const TriGrid& g, const NodeArray& alpha, const NodeArray& beta,
                      const NodeArray& alpha_v, const NodeArray& beta_u, NodeArray& alpha_u,
                      NodeArray& beta_v) {
  const int n = g.n;
  const double d = g.delta();
  std::vector<double> diag_a(n + 1), diag_b(n + 1);
  for (int j = 0; j <= n; ++j) {
    diag_a[j] = alpha(j, j);
    diag_b[j] = beta(j, j);
  }
  const std::vector<double> da = sample_derivative(diag_a, d);
  const std::vector<double> db = sample_derivative(diag_b, d);
  for (int j = 0; j <= n; ++j) {
    alpha_u(j, j) = da[j] - alpha_v(j, j);
    beta_v(j, j) = db[j] - beta_u(j, j);
  }
  // alpha_u along rows of constant v.
  for (int j = 0; j < n; ++j) {
    for (int i = j + 1; i < n; ++i) alpha_u(i, j) = (alpha(i + 1, j) - alpha(i - 1, j)) / (2 * d);
    if (n - j >= 2)
      alpha_u(n, j) = (3 * alpha(n, j) - 4 * alpha(n - 1, j) + alpha(n - 2, j)) / (2 * d);
    else
      alpha_u(n, j) = 2 * (alpha(n, j) - alpha(n - 1, j)) / d - alpha_u(n - 1, j);
  }
  // beta_v along columns of constant u.
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j < i; ++j) beta_v(i, j) = (beta(i, j + 1) - beta(i, j - 1)) / (2 * d);
    if (i >= 2)
      beta_v(i, 0) = (-3 * beta(i, 0) + 4 * beta(i, 1) - beta(i, 2)) / (2 * d);
    else
      beta_v(i, 0) = 2 * (beta(i, 1) - beta(i, 0)) / d - beta_v(i, 1);
  }
}

}  // namespace

FixedBvpResult solve_fixed_bvp(const StateAheadModel& model, const InitialData& init,
                               const BoundaryFunctions& bf, const TriGrid& g,
                               const FixedBvpOptions& opt) {
  const int n = g.n;
  const double d = g.delta();
  const BarotropicEos& eos = model.eos();
  const CuspData& cusp = model.cusp();
  const double v_floor = opt.v_floor_fraction * d;
  if (static_cast<int>(init.u.size()) != n + 1 || static_cast<int>(init.r_excess.size()) != n + 1 || static_cast<int>(bf.v.size()) != n + 1)
    throw ConfigError("initial data and boundary functions must be sampled on the grid");

  std::vector<double> beta_plus(n + 1);
  for (int j = 0; j <= n; ++j) beta_plus[j] = cusp.beta0 + g.v(j) * g.v(j) * bf.beta_hat_plus[j];

  FixedBvpResult out;
  FieldGrid& f = out.fields;
  f.grid = g;
  f.r0 = cusp.r0;
  f.alpha = NodeArray(g);
  f.beta = NodeArray(g);
  f.alpha_v = NodeArray(g);
  f.beta_u = NodeArray(g);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= i; ++j) {
      f.alpha(i, j) = init.alpha_i[i];
      f.beta(i, j) = beta_plus[j];
    }

  NodeArray alpha_u(g), beta_v(g);
  Workspace ws;
  ws.states.resize(g.size());
  std::vector<double> gamma_inv(n + 1, 0.0);
  LinearTSolution lin;
  bool has_warm = false;

  const double c_plus0 = model.c_plus0();
  auto plus_offset = [&](int i, int j) {
    return plus_speed_offset(eos, model.cusp_state(), f.alpha(i, j) - cusp.alpha0, f.beta(i, j) - cusp.beta0);
  };

  // One pass of the map (alpha, beta) -> t -> r -> sources, leaving the new
  // alpha_v, beta_u, t, r in f. Returns nothing; the caller integrates.
  auto pass = [&]() {
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= i; ++j) ws.states[g.idx(i, j)] = evaluate(eos, {f.alpha(i, j), f.beta(i, j)});
    grid_derivatives(g, f.alpha, f.beta, f.alpha_v, f.beta_u, alpha_u, beta_v);
    f.mu = NodeArray(g);
    f.nu = NodeArray(g);
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= i; ++j) {
        const PointState& s = ws.at(g, i, j);
        const SpeedGradient sg = s.speed_gradient();
        const double gap = s.c_plus - s.c_minus;
        f.mu(i, j) = (sg.dcp_dalpha * alpha_u(i, j) + sg.dcp_dbeta * f.beta_u(i, j)) / gap;
        f.nu(i, j) = (sg.dcm_dalpha * f.alpha_v(i, j) + sg.dcm_dbeta * beta_v(i, j)) / gap;
      }
    for (int j = 1; j <= n; ++j) gamma_inv[j] = gamma_inverse(bf, f.alpha(j, j), model, g, j, v_floor);
    lin = solve_linear_t(g, f.mu, f.nu, gamma_inv, init.h, init.dh, opt.linear, has_warm ? &lin : nullptr);
    has_warm = true;
    out.linear_iterations.push_back(static_cast<int>(lin.history.size()));
    f.t = lin.t;
    f.dt_du = lin.dt_du;
    f.dt_dv = lin.dt_dv;
    // r - r0: along v = 0 the model value plus the trapezoid integral of
    // c_minus t_u - dr*/du, which vanishes to high order at the corner and so
    // leaves no O(delta^2 / v^2) error in delta_hat; then up each column with
    // c_plus t_v.
    f.dr = NodeArray(g);
    f.r_excess = NodeArray(g);
    double defect = 0.0;
    for (int i = 1; i <= n; ++i) {
      auto gap = [&](int k) { return ws.at(g, k, 0).c_minus * f.dt_du(k, 0) - init.dr_du[k]; };
      defect += 0.5 * d * (gap(i - 1) + gap(i));
      f.r_excess(i, 0) = init.r_excess[i] + defect;
      f.dr(i, 0) = f.r_excess(i, 0) + c_plus0 * init.h[i];
    }
    for (int i = 0; i <= n; ++i)
      for (int j = 1; j <= i; ++j)
        f.dr(i, j) = f.dr(i, j - 1) + 0.5 * d * (ws.at(g, i, j - 1).c_plus * f.dt_dv(i, j - 1) +
                                                 ws.at(g, i, j).c_plus * f.dt_dv(i, j));
    for (int i = 0; i <= n; ++i) {
      double prev = plus_offset(i, 0) * f.dt_dv(i, 0);
      for (int j = 1; j <= i; ++j) {
        const double cur = plus_offset(i, j) * f.dt_dv(i, j);
        f.r_excess(i, j) = f.r_excess(i, j - 1) + 0.5 * d * (prev + cur);
        prev = cur;
      }
    }
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= i; ++j) {
        auto [a_src, b_src] = source_terms(ws.at(g, i, j), f.r(i, j));
        f.alpha_v(i, j) = f.dt_dv(i, j) * a_src;
        f.beta_u(i, j) = f.dt_du(i, j) * b_src;
      }
  };

  for (int it = 0; it < opt.max_iter; ++it) {
    pass();
    double change = 0.0;
    for (int i = 0; i <= n; ++i) {
      double acc = init.alpha_i[i];
      for (int j = 0; j <= i; ++j) {
        if (j > 0) acc += 0.5 * d * (f.alpha_v(i, j - 1) + f.alpha_v(i, j));
        change = std::max(change, std::abs(acc - f.alpha(i, j)));
        f.alpha(i, j) = acc;
      }
    }
    for (int j = 0; j <= n; ++j) {
      double acc = beta_plus[j];
      for (int i = j; i <= n; ++i) {
        if (i > j) acc += 0.5 * d * (f.beta_u(i - 1, j) + f.beta_u(i, j));
        change = std::max(change, std::abs(acc - f.beta(i, j)));
        f.beta(i, j) = acc;
      }
    }
    out.history.push_back(change);
    if (change < opt.tol_inner) {
      pass();  // t, r and sources consistent with the final invariants
      return out;
    }
  }
  throw NonConvergence("inner iteration did not converge", out.history);
}

double CharacteristicResiduals::max() const {
  return std::max({alpha, beta, hodograph_v, hodograph_u});
}

CharacteristicResiduals characteristic_residuals(const FieldGrid& f, const BarotropicEos& eos) {
  const TriGrid& g = f.grid;
  const int n = g.n;
  const double d = g.delta();
  CharacteristicResiduals res;
  for (int i = 2; i < n; ++i)
    for (int j = 1; j < i - 1; ++j) {
      const PointState s = evaluate(eos, {f.alpha(i, j), f.beta(i, j)});
      auto [a_src, b_src] = source_terms(s, f.r(i, j));
      const double a_v = (f.alpha(i, j + 1) - f.alpha(i, j - 1)) / (2 * d);
      const double b_u = (f.beta(i + 1, j) - f.beta(i - 1, j)) / (2 * d);
      const double r_v = (f.dr(i, j + 1) - f.dr(i, j - 1)) / (2 * d);
      const double r_u = (f.dr(i + 1, j) - f.dr(i - 1, j)) / (2 * d);
      const double t_v = (f.t(i, j + 1) - f.t(i, j - 1)) / (2 * d);
      const double t_u = (f.t(i + 1, j) - f.t(i - 1, j)) / (2 * d);
      res.alpha = std::max(res.alpha, std::abs(a_v - t_v * a_src));
      res.beta = std::max(res.beta, std::abs(b_u - t_u * b_src));
      res.hodograph_v = std::max(res.hodograph_v, std::abs(r_v - s.c_plus * t_v));
      res.hodograph_u = std::max(res.hodograph_u, std::abs(r_u - s.c_minus * t_u));
    }
  return res;
}

void write_grid_csv(std::ostream& os, const FieldGrid& f) {
  const TriGrid& g = f.grid;
  const auto old_precision = os.precision(17);
  os << "i,j,u,v,t,r,alpha,beta,dt_du,dt_dv\n";
  for (int i = 0; i <= g.n; ++i)
    for (int j = 0; j <= i; ++j)
      os << i << ',' << j << ',' << g.u(i) << ',' << g.v(j) << ',' << f.t(i, j) << ',' << f.r(i, j) << ','
         << f.alpha(i, j) << ',' << f.beta(i, j) << ',' << f.dt_du(i, j) << ',' << f.dt_dv(i, j) << '\n';
  os.precision(old_precision);
}

}  // namespace shockdev
