#include "shockdev/numerics.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <stdexcept>

#include "shockdev/errors.hpp"

namespace shockdev::numerics {

namespace {

double simpson_step(const ScalarFn& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

UnitRule make_unit_rule() {
  using Rule = boost::math::quadrature::gauss<double, 12>;
  const auto& abscissa = Rule::abscissa();
  const auto& weight = Rule::weights();
  UnitRule rule;
  // Boost stores the non-negative half of the symmetric rule on [-1, 1].
  for (std::size_t k = abscissa.size(); k-- > 0;) {
    if (abscissa[k] == 0.0) continue;
    rule.nodes.push_back(0.5 * (1.0 - abscissa[k]));
    rule.weights.push_back(0.5 * weight[k]);
  }
  for (std::size_t k = 0; k < abscissa.size(); ++k) {
    rule.nodes.push_back(0.5 * (1.0 + abscissa[k]));
    rule.weights.push_back(0.5 * weight[k]);
  }
  return rule;
}

}  // namespace

double adaptive_simpson(const ScalarFn& f, double a, double b, double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

const UnitRule& unit_gauss_rule() {
  static const UnitRule rule = make_unit_rule();
  return rule;
}

double gauss_integrate(const ScalarFn& f, double a, double b, int panels) {
  const UnitRule& rule = unit_gauss_rule();
  const double width = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    double panel = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) panel += rule.weights[k] * f(lo + rule.nodes[k] * width);
    total += panel * width;
  }
  return total;
}

double central_diff4(const ScalarFn& f, double x, double h) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

double central_second_diff4(const ScalarFn& f, double x, double h) {
  return (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) /
         (12 * h * h);
}

std::vector<double> monomial_fit(std::span<const double> x, std::span<const double> y,
                                 std::span<const int> powers) {
  if (x.size() != y.size() || x.size() < powers.size())
    throw std::invalid_argument("monomial_fit: not enough samples");
  // Columns are scaled by the largest |x| so the normal matrix stays tame.
  double scale = 0.0;
  for (double xi : x) scale = std::max(scale, std::abs(xi));
  if (scale == 0.0) scale = 1.0;
  Eigen::MatrixXd a(x.size(), powers.size());
  Eigen::VectorXd rhs(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t k = 0; k < powers.size(); ++k) a(i, k) = std::pow(x[i] / scale, powers[k]);
    rhs(i) = y[i];
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(rhs);
  std::vector<double> out(powers.size());
  for (std::size_t k = 0; k < powers.size(); ++k) out[k] = c(k) / std::pow(scale, powers[k]);
  return out;
}

std::vector<double> polyfit(std::span<const double> x, std::span<const double> y, int degree) {
  std::vector<int> powers(degree + 1);
  for (int k = 0; k <= degree; ++k) powers[k] = k;
  return monomial_fit(x, y, powers);
}

double power_law_exponent(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0 || y[i] == 0.0) continue;
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(std::abs(y[i])));
  }
  if (lx.size() < 2) throw std::invalid_argument("power_law_exponent: not enough samples");
  return polyfit(lx, ly, 1)[1];
}

std::vector<std::size_t> smallest_decade(std::span<const double> x, std::size_t skip,
                                         std::size_t min_points) {
  std::vector<std::size_t> idx;
  if (x.size() <= skip) return idx;
  const double limit = 10.0 * x[skip];
  for (std::size_t i = skip; i < x.size(); ++i) {
    if (x[i] <= limit || idx.size() < min_points) idx.push_back(i);
  }
  return idx;
}

double extrapolate_to_zero(std::span<const double> x, std::span<const double> y, int degree,
                           std::size_t skip) {
  const auto idx = smallest_decade(x, skip);
  std::vector<double> xs, ys;
  for (std::size_t i : idx) {
    xs.push_back(x[i]);
    ys.push_back(y[i]);
  }
  return polyfit(xs, ys, degree)[0];
}

double bisect(const ScalarFn& f, double a, double b, double x_tol, int max_iter) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0)) throw NoRoot("bisection bracket has no sign change");
  for (int it = 0; it < max_iter && std::abs(b - a) > x_tol; ++it) {
    const double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace shockdev::numerics
