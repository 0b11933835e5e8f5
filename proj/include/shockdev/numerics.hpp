#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace shockdev::numerics {

using ScalarFn = std::function<double(double)>;

// Adaptive Simpson quadrature of f over [a, b] to the given absolute tolerance.
double adaptive_simpson(const ScalarFn& f, double a, double b, double abs_tol = 1e-12,
                        int max_depth = 50);

// Gauss-Legendre rule mapped to [0, 1]. Nodes ascend.
struct UnitRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const UnitRule& unit_gauss_rule();

// Integral of f over [a, b] with the unit rule on `panels` equal panels.
double gauss_integrate(const ScalarFn& f, double a, double b, int panels = 1);

// Fourth-order central differences.
double central_diff4(const ScalarFn& f, double x, double h);
double central_second_diff4(const ScalarFn& f, double x, double h);

// Combine estimates at step h and h/2 of a quantity with error O(h^order).
inline double richardson(double coarse, double fine, int order) {
  const double factor = static_cast<double>(1 << order);
  return (factor * fine - coarse) / (factor - 1.0);
}

// Least-squares polynomial coefficients c_0..c_degree for y ~ sum c_k x^k.
std::vector<double> polyfit(std::span<const double> x, std::span<const double> y, int degree);

// Least-squares fit y ~ sum_k c_k x^{powers[k]} for arbitrary exponents.
std::vector<double> monomial_fit(std::span<const double> x, std::span<const double> y,
                                 std::span<const int> powers);

// Log-log least squares slope of |y| against x.
double power_law_exponent(std::span<const double> x, std::span<const double> y);

// Sample window used by the v -> 0 fits: skip the first `skip` nodes and keep
// nodes up to ten times the first retained abscissa (at least `min_points`).
std::vector<std::size_t> smallest_decade(std::span<const double> x, std::size_t skip = 3,
                                         std::size_t min_points = 6);

// Extrapolate y(x) to x = 0 with a polynomial of the given degree fitted on
// the smallest-decade window.
double extrapolate_to_zero(std::span<const double> x, std::span<const double> y,
                           int degree = 2, std::size_t skip = 3);

// Plain bisection on a sign-changing bracket.
double bisect(const ScalarFn& f, double a, double b, double x_tol, int max_iter = 400);

}  // namespace shockdev::numerics
