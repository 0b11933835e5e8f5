#include "shockdev/state_ahead.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "shockdev/errors.hpp"

namespace shockdev {

namespace {

double falling(int n, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= n - i;
  return out;
}

std::string field_name(Field f) {
  switch (f) {
    case Field::alpha: return "alpha";
    case Field::beta: return "beta";
    case Field::r: return "r";
  }
  return "?";
}

}  // namespace

// ------------------------------------------------------------------ Poly2D

Poly2D::Poly2D(int degree) : degree_(degree), c_((degree + 1) * (degree + 1), 0.0) {}

double Poly2D::coeff(int a, int b) const {
  if (a < 0 || b < 0 || a + b > degree_) return 0.0;
  return c_[a * (degree_ + 1) + b];
}

void Poly2D::set(int a, int b, double value) {
  if (a < 0 || b < 0 || a + b > degree_)
    throw ConfigError("monomial t^" + std::to_string(a) + " w^" + std::to_string(b) + " exceeds model degree");
  c_[a * (degree_ + 1) + b] = value;
}

double Poly2D::derivative(double t, double w, int dt, int dw) const {
  // Horner in w for each power of t, then Horner in t.
  double outer = 0.0;
  for (int a = degree_; a >= dt; --a) {
    double inner = 0.0;
    for (int b = degree_ - a; b >= dw; --b) inner = inner * w + coeff(a, b) * falling(b, dw);
    outer = outer * t + inner * falling(a, dt);
  }
  return outer;
}

double Poly2D::eval(double t, double w) const { return derivative(t, w, 0, 0); }

double Poly2D::eval_offset(double t, double w) const {
  double sum = 0.0;
  double tp = 1.0;
  for (int a = 0; a <= degree_; ++a) {
    double wp = 1.0;
    for (int b = 0; a + b <= degree_; ++b) {
      if (a + b > 0) sum += coeff(a, b) * tp * wp;
      wp *= w;
    }
    tp *= t;
  }
  return sum;
}

// -------------------------------------------------------------------- model

StateAheadModel::StateAheadModel(CuspData cusp, EosPtr eos, int degree, ValidityBox box,
                                 const std::map<std::string, double>& overrides)
    : cusp_(std::move(cusp)), eos_(std::move(eos)), degree_(degree), box_(box),
      alpha_(degree), beta_(degree), r_(degree) {
  if (degree < 4) throw ConfigError("state-ahead model degree must be at least 4");
  if (!(cusp_.kappa > 0)) throw InconsistentCusp("kappa must be positive");
  if (!(cusp_.lambda > 0)) throw InconsistentCusp("lambda must be positive");
  if (!(cusp_.r0 > 0)) throw InconsistentCusp("r0 must be positive");

  ref_ = evaluate(*eos_, {cusp_.alpha0, cusp_.beta0});
  const SpeedGradient g = ref_.speed_gradient();
  if (!(std::abs(g.dcp_dalpha) > 1e-14))
    throw InconsistentCusp("dc_plus/dalpha vanishes at the cusp state; kappa cannot be matched");
  const double alpha_dot0 = cusp_.kappa / g.dcp_dalpha;
  if (cusp_.alpha_dot0 && std::abs(*cusp_.alpha_dot0 - alpha_dot0) > 1e-10 * std::abs(alpha_dot0))
    throw InconsistentCusp("alpha_dot0 = " + std::to_string(*cusp_.alpha_dot0) +
                           " disagrees with kappa / (dc_plus/dalpha)_0 = " + std::to_string(alpha_dot0));
  cusp_.alpha_dot0 = alpha_dot0;
  dcm_dw0_ = g.dcm_dalpha * alpha_dot0;
  if (cusp_.l && std::abs(*cusp_.l - dcm_dw0_) > 1e-10 * std::max(1.0, std::abs(dcm_dw0_)))
    throw InconsistentCusp("l disagrees with (dc_minus/dalpha)_0 * alpha_dot0 = " + std::to_string(dcm_dw0_));
  cusp_.l = dcm_dw0_;
  auto [a0, b0] = source_terms(ref_, cusp_.r0);
  a_tilde0_ = a0;
  b_tilde0_ = b0;

  const double k = cusp_.kappa, l = cusp_.lambda;
  r_.set(0, 0, cusp_.r0);
  r_.set(1, 0, ref_.c_plus);
  r_.set(1, 1, k);
  r_.set(0, 3, -l / (6.0 * k));
  r_.set(0, 4, cusp_.xi / (24.0 * k));
  alpha_.set(0, 0, cusp_.alpha0);
  alpha_.set(1, 0, a_tilde0_);
  alpha_.set(0, 1, alpha_dot0);
  alpha_.set(0, 2, 0.5 * cusp_.alpha_ddot0);
  beta_.set(0, 0, cusp_.beta0);
  beta_.set(1, 0, cusp_.dbeta_dt0);

  const std::set<std::pair<int, int>> fixed_r{{0, 0}, {1, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1}, {0, 4}};
  const std::set<std::pair<int, int>> fixed_ab{{0, 0}, {1, 0}, {0, 1}, {0, 2}};
  for (const auto& [key, value] : overrides) {
    // Keys look like "r:2,0" meaning the coefficient of t^2 w^0 in r*.
    const auto colon = key.find(':');
    const auto comma = key.find(',');
    if (colon == std::string::npos || comma == std::string::npos || comma < colon)
      throw ConfigError("bad coefficient override key '" + key + "'");
    const std::string name = key.substr(0, colon);
    int a = 0, b = 0;
    try {
      a = std::stoi(key.substr(colon + 1, comma - colon - 1));
      b = std::stoi(key.substr(comma + 1));
    } catch (const std::exception&) {
      throw ConfigError("bad coefficient override key '" + key + "'");
    }
    Poly2D* target = name == "alpha" ? &alpha_ : name == "beta" ? &beta_ : name == "r" ? &r_ : nullptr;
    if (!target) throw ConfigError("unknown field in override '" + key + "'");
    const auto& fixed = target == &r_ ? fixed_r : fixed_ab;
    if (fixed.count({a, b}))
      throw ConfigError("override '" + key + "' touches a coefficient fixed by the cusp constraints");
    target->set(a, b, value);
  }
}

const Poly2D& StateAheadModel::poly(Field f) const {
  switch (f) {
    case Field::alpha: return alpha_;
    case Field::beta: return beta_;
    case Field::r: return r_;
  }
  return r_;
}

bool StateAheadModel::in_box(double t, double w) const {
  return std::abs(t) <= box_.t_max && std::abs(w) <= box_.w_max;
}

void StateAheadModel::check_box(double t, double w) const {
  if (!in_box(t, w)) {
    std::ostringstream os;
    os.precision(6);
    os << "(t, w) = (" << t << ", " << w << ") outside |t| <= " << box_.t_max << ", |w| <= " << box_.w_max;
    throw OutOfBox(os.str());
  }
}

double StateAheadModel::eval(Field f, double t, double w, int dt, int dw) const {
  check_box(t, w);
  return poly(f).derivative(t, w, dt, dw);
}

double StateAheadModel::eval_offset(Field f, double t, double w) const {
  check_box(t, w);
  return poly(f).eval_offset(t, w);
}

double StateAheadModel::radial_excess(double t, double w) const {
  check_box(t, w);
  double sum = 0.0;
  for (int a = r_.degree(); a >= 0; --a) {
    double row = 0.0;
    for (int b = r_.degree() - a; b >= 0; --b) {
      const bool dropped = b == 0 && a <= 1;
      row = row * w + (dropped ? 0.0 : r_.coeff(a, b));
    }
    sum = sum * t + row;
  }
  return sum;
}

RiemannPair StateAheadModel::pair_at(double t, double w) const {
  return {eval(Field::alpha, t, w), eval(Field::beta, t, w)};
}

double StateAheadModel::singular_boundary(double w) const {
  const double k = cusp_.kappa;
  double t = cusp_.lambda / (2.0 * k * k) * w * w;
  for (int it = 0; it < 50; ++it) {
    const double f = r_.derivative(t, w, 0, 1);
    const double df = r_.derivative(t, w, 1, 1);
    const double step = f / df;
    t -= step;
    if (std::abs(step) <= 1e-16 * std::abs(t)) break;
  }
  return t;
}

std::string StateAheadModel::dump_json() const {
  nlohmann::ordered_json doc;
  doc["eos"] = eos_->label();
  doc["degree"] = degree_;
  doc["cusp"] = {{"kappa", cusp_.kappa},        {"lambda", cusp_.lambda},       {"alpha0", cusp_.alpha0},
                 {"beta0", cusp_.beta0},        {"r0", cusp_.r0},               {"alpha_dot0", *cusp_.alpha_dot0},
                 {"alpha_ddot0", cusp_.alpha_ddot0}, {"dbeta_dt0", cusp_.dbeta_dt0}, {"xi", cusp_.xi},
                 {"l", *cusp_.l}};
  doc["box"] = {{"t_max", box_.t_max}, {"w_max", box_.w_max}};
  for (Field f : {Field::alpha, Field::beta, Field::r}) {
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    const Poly2D& p = poly(f);
    for (int a = 0; a <= degree_; ++a)
      for (int b = 0; a + b <= degree_; ++b)
        if (p.coeff(a, b) != 0.0) terms.push_back({{"t_power", a}, {"w_power", b}, {"coefficient", p.coeff(a, b)}});
    doc["fields"][field_name(f)] = terms;
  }
  return doc.dump(2);
}

StateAheadModel synthesize_model(const CuspData& cusp, EosPtr eos, int degree, double eps,
                                 const std::map<std::string, double>& overrides) {
  if (!(eps > 0)) throw ConfigError("eps must be positive");
  return StateAheadModel(cusp, std::move(eos), degree, {10.0 * eps * eps, 2.0 * eps}, overrides);
}

// ------------------------------------------------------ incoming characteristic

namespace {

double characteristic_slope(const StateAheadModel& m, double t, double w) {
  if (!m.in_box(t, w)) throw LeftBox("incoming characteristic left the validity box");
  const PointState s = evaluate(m.eos(), m.pair_at(t, w));
  return -m.eval(Field::r, t, w, 0, 1) / (s.c_plus - s.c_minus);
}

}  // namespace

IncomingCharacteristic incoming_characteristic(const StateAheadModel& model, double u_max,
                                               int n_points, int substeps) {
  if (!(u_max > 0) || n_points < 1) throw ConfigError("incoming characteristic needs u_max > 0 and n_points >= 1");
  if (u_max > model.box().w_max) throw LeftBox("u_max exceeds the validity box");
  const CuspData& c = model.cusp();
  const double dc0 = model.c_plus0() - model.c_minus0();
  const double cubic = c.lambda / (6.0 * c.kappa * dc0);
  const double w_series = 1e-3 * u_max;

  IncomingCharacteristic out;
  out.w.resize(n_points + 1);
  out.t.resize(n_points + 1);
  out.dt_dw.resize(n_points + 1);
  const double dw_node = u_max / n_points;
  double w = 0.0, t = 0.0;
  for (int i = 0; i <= n_points; ++i) {
    const double target = i * dw_node;
    if (target < w_series) {
      w = target;
      t = cubic * w * w * w;
    } else {
      if (w < w_series) {
        w = w_series;
        t = cubic * w * w * w;
      }
      const int steps = std::max(1, static_cast<int>(std::ceil((target - w) / dw_node * substeps)));
      const double hstep = (target - w) / steps;
      for (int s = 0; s < steps; ++s) {
        const double k1 = characteristic_slope(model, t, w);
        const double k2 = characteristic_slope(model, t + 0.5 * hstep * k1, w + 0.5 * hstep);
        const double k3 = characteristic_slope(model, t + 0.5 * hstep * k2, w + 0.5 * hstep);
        const double k4 = characteristic_slope(model, t + hstep * k3, w + hstep);
        t += hstep / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        w += hstep;
      }
      w = target;
    }
    out.w[i] = w;
    out.t[i] = t;
    out.dt_dw[i] = characteristic_slope(model, t, w);
  }
  return out;
}

InitialData initial_data(const StateAheadModel& model, double eps, int n) {
  const IncomingCharacteristic ch = incoming_characteristic(model, eps, n);
  const CuspData& c = model.cusp();
  const double dc0 = model.c_plus0() - model.c_minus0();
  InitialData d;
  d.u = ch.w;
  d.h = ch.t;
  d.dh = ch.dt_dw;
  const std::size_t m = ch.w.size();
  d.h_hat.resize(m);
  d.alpha_i.resize(m);
  d.alpha_i_offset.resize(m);
  d.dalpha_i.resize(m);
  d.alpha_hat.resize(m);
  d.r_excess.resize(m);
  d.dr_du.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double u = d.u[i], h = d.h[i];
    d.alpha_i[i] = model.eval(Field::alpha, h, u);
    d.alpha_i_offset[i] = model.eval_offset(Field::alpha, h, u);
    d.r_excess[i] = model.radial_excess(h, u);
    d.dr_du[i] = model.eval(Field::r, h, u, 1, 0) * d.dh[i] + model.eval(Field::r, h, u, 0, 1);
    d.dalpha_i[i] = model.eval(Field::alpha, h, u, 1, 0) * d.dh[i] + model.eval(Field::alpha, h, u, 0, 1);
    if (u == 0.0) {
      d.h_hat[i] = c.lambda / (6.0 * c.kappa * dc0);
      d.alpha_hat[i] = 0.5 * c.alpha_ddot0;
    } else {
      d.h_hat[i] = h / (u * u * u);
      d.alpha_hat[i] = (d.alpha_i_offset[i] - model.alpha_dot0() * u) / (u * u);
    }
  }
  return d;
}

}  // namespace shockdev
