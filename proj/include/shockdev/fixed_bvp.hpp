#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "shockdev/state_ahead.hpp"

namespace shockdev {

// Uniform characteristic grid on {0 <= v <= u <= eps}: node (i, j) sits at
// (u, v) = (i, j) * delta with 0 <= j <= i <= n.
struct TriGrid {
  double eps = 0;
  int n = 0;

  TriGrid() = default;
  TriGrid(double eps_, int n_);
  double delta() const { return eps / n; }
  double u(int i) const { return i * delta(); }
  double v(int j) const { return j * delta(); }
  std::size_t size() const { return static_cast<std::size_t>(n + 1) * (n + 1); }
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * (n + 1) + j; }
};

// Values at the nodes of a TriGrid; entries with j > i are unused.
class NodeArray {
 public:
  NodeArray() = default;
  explicit NodeArray(const TriGrid& g, double fill = 0.0) : n_(g.n), data_(g.size(), fill) {}
  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * (n_ + 1) + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * (n_ + 1) + j]; }
  bool empty() const { return data_.empty(); }

 private:
  int n_ = 0;
  std::vector<double> data_;
};

// Hatted boundary triple on the shock: z = v y, beta_plus = beta0 + v^2 beta_hat,
// V = c_plus0 + (kappa/2)(1 + y) v + v^2 V_hat. Sampled at v_j, j = 0..n.
struct BoundaryFunctions {
  std::vector<double> v;
  std::vector<double> y;
  std::vector<double> beta_hat_plus;
  std::vector<double> v_hat;

  // Starting triple: y = -1, beta_hat = (lambda / 6 kappa^2) (d beta*/dt)_0, V_hat = 0.
  static BoundaryFunctions seed(const StateAheadModel& model, const TriGrid& grid);
  double speed_excess(const StateAheadModel& model, int j) const;  // V - c_plus0
};

struct FieldGrid {
  TriGrid grid;
  double r0 = 0;
  NodeArray t, dr, alpha, beta, dt_du, dt_dv;
  NodeArray alpha_v, beta_u;  // dt_dv * A_tilde and dt_du * B_tilde
  NodeArray mu, nu;           // coefficients of the linear equation for t
  // r - r0 - c_plus0 t, accumulated from (c_plus - c_plus0) t_v so that it
  // stays accurate where r - r0 and c_plus0 t nearly cancel.
  NodeArray r_excess;
  double r(int i, int j) const { return r0 + dr(i, j); }
};

// The sweeps stop when every node changes by less than tol relative to its
// own value (values below 1e-12 of the grid maximum count as that floor).
struct LinearTOptions {
  double tol = 1e-15;
  int max_iter = 400;
};

struct LinearTSolution {
  NodeArray t, dt_du, dt_dv;
  std::vector<double> history;  // sup-norm change per sweep
};

// Picard iteration for t_u, t_v given mu, nu on the grid, 1/gamma on the
// diagonal (entry 0 unused, a(0) = 0) and the data h, h' on v = 0.
LinearTSolution solve_linear_t(const TriGrid& grid, const NodeArray& mu, const NodeArray& nu,
                               const std::vector<double>& gamma_inv, const std::vector<double>& h,
                               const std::vector<double>& dh, const LinearTOptions& opt = {},
                               const LinearTSolution* warm = nullptr);

// Same discrete equations solved directly, level by level in v.
LinearTSolution solve_linear_t_marching(const TriGrid& grid, const NodeArray& mu, const NodeArray& nu,
                                        const std::vector<double>& gamma_inv,
                                        const std::vector<double>& h, const std::vector<double>& dh);

// 1/gamma = (V - c_minus) / (c_plus - V) on the diagonal at node j, with the
// behind speeds taken at (alpha_diag, beta_plus(v_j)). Below v_floor the
// leading singular form (c_plus0 - c_minus0) / (kappa v) is returned, which is
// infinite at v = 0; the caller sets a(0) = 0 there.
double gamma_inverse(const BoundaryFunctions& bf, double alpha_diag, const StateAheadModel& model,
                     const TriGrid& grid, int j, double v_floor);

struct FixedBvpOptions {
  double tol_inner = 1e-12;
  int max_iter = 400;
  LinearTOptions linear{};
  double v_floor_fraction = 0.5;  // v_floor = fraction * delta
};

struct FixedBvpResult {
  FieldGrid fields;
  std::vector<double> history;           // sup-norm change of (alpha, beta) per iteration
  std::vector<int> linear_iterations;    // Picard sweeps used by each linear solve
  double contraction_ratio() const;      // geometric mean over the settled iterations
};

FixedBvpResult solve_fixed_bvp(const StateAheadModel& model, const InitialData& init,
                               const BoundaryFunctions& bf, const TriGrid& grid,
                               const FixedBvpOptions& opt = {});

// Centered-difference residuals of the characteristic system at interior
// nodes: alpha_v - t_v A, beta_u - t_u B, r_v - c_plus t_v, r_u - c_minus t_u.
struct CharacteristicResiduals {
  double alpha = 0, beta = 0, hodograph_v = 0, hodograph_u = 0;
  double max() const;
};
CharacteristicResiduals characteristic_residuals(const FieldGrid& fields, const BarotropicEos& eos);

// Grid dump, one row per node: i, j, u, v, t, r, alpha, beta, dt_du, dt_dv.
void write_grid_csv(std::ostream& os, const FieldGrid& fields);

// Second-order derivative of equally spaced samples (centered inside, one-sided at ends).
std::vector<double> sample_derivative(const std::vector<double>& f, double step);

}  // namespace shockdev
