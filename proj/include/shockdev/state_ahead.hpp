#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shockdev/eos.hpp"
#include "shockdev/state.hpp"

namespace shockdev {

// Scalar data of the cusp point where the shock starts.
struct CuspData {
  double kappa = 1.0;
  double lambda = 1.0;
  double alpha0 = 0.0;
  double beta0 = 0.0;
  double r0 = 1.0;
  double alpha_ddot0 = 0.0;  // d^2 alpha*/dw^2 at the cusp
  double dbeta_dt0 = 0.0;    // d beta*/dt at the cusp
  double xi = 0.0;           // kappa * d^4 r*/dw^4 at the cusp
  // Normally solved from kappa = (dc_plus/dalpha)_0 * alpha_dot0; a supplied
  // value must agree with that relation.
  std::optional<double> alpha_dot0;
  // Optional check value for (dc_minus/dw)_0 along t = 0.
  std::optional<double> l;
};

// Dense coefficient table of a polynomial sum c[a][b] t^a w^b with a + b <= degree.
class Poly2D {
 public:
  explicit Poly2D(int degree = 0);
  int degree() const { return degree_; }
  double coeff(int a, int b) const;
  void set(int a, int b, double value);
  double eval(double t, double w) const;
  // Value minus the constant term, summed without forming the constant.
  double eval_offset(double t, double w) const;
  // Partial derivative d^{dt+dw} / dt^dt dw^dw.
  double derivative(double t, double w, int dt, int dw) const;

 private:
  int degree_;
  std::vector<double> c_;  // (degree+1)^2, entries with a+b > degree are zero
};

enum class Field { alpha, beta, r };

struct ValidityBox {
  double t_max = 0;
  double w_max = 0;
};

class StateAheadModel {
 public:
  StateAheadModel(CuspData cusp, EosPtr eos, int degree, ValidityBox box,
                  const std::map<std::string, double>& overrides = {});

  const CuspData& cusp() const { return cusp_; }
  const BarotropicEos& eos() const { return *eos_; }
  EosPtr eos_ptr() const { return eos_; }
  int degree() const { return degree_; }
  const ValidityBox& box() const { return box_; }
  const Poly2D& poly(Field f) const;

  double alpha_dot0() const { return *cusp_.alpha_dot0; }
  double c_plus0() const { return ref_.c_plus; }
  double c_minus0() const { return ref_.c_minus; }
  double a_tilde0() const { return a_tilde0_; }
  double b_tilde0() const { return b_tilde0_; }
  double dcm_dw0() const { return dcm_dw0_; }
  const PointState& cusp_state() const { return ref_; }
  RiemannPair cusp_pair() const { return {cusp_.alpha0, cusp_.beta0}; }

  bool in_box(double t, double w) const;
  double eval(Field f, double t, double w, int dt = 0, int dw = 0) const;
  double eval_offset(Field f, double t, double w) const;
  // r* - r0 - c_plus0 t, summed without the constant and linear-in-t terms.
  double radial_excess(double t, double w) const;
  RiemannPair pair_at(double t, double w) const;

  // Locus t*(w) where dr*/dw vanishes.
  double singular_boundary(double w) const;

  // Coefficient dump for reproducibility, as a JSON document.
  std::string dump_json() const;

 private:
  void check_box(double t, double w) const;

  CuspData cusp_;
  EosPtr eos_;
  int degree_;
  ValidityBox box_;
  Poly2D alpha_, beta_, r_;
  PointState ref_;
  double a_tilde0_ = 0, b_tilde0_ = 0, dcm_dw0_ = 0;
};

// Minimal polynomial realization of the cusp constraints. The box is
// |t| <= 10 eps^2, |w| <= 2 eps.
StateAheadModel synthesize_model(const CuspData& cusp, EosPtr eos, int degree, double eps,
                                 const std::map<std::string, double>& overrides = {});

struct IncomingCharacteristic {
  std::vector<double> w;
  std::vector<double> t;
  std::vector<double> dt_dw;
};

// Incoming characteristic through the cusp, dt/dw = -r*_w / (c_plus - c_minus),
// sampled at n_points + 1 equally spaced w in [0, u_max].
IncomingCharacteristic incoming_characteristic(const StateAheadModel& model, double u_max,
                                               int n_points, int substeps = 8);

struct InitialData {
  std::vector<double> u;
  std::vector<double> h, dh, h_hat;
  std::vector<double> alpha_i, alpha_i_offset, dalpha_i, alpha_hat;
  // r - r0 - c_plus0 h and d r / du along the characteristic, from the model.
  std::vector<double> r_excess, dr_du;
};

InitialData initial_data(const StateAheadModel& model, double eps, int n);

}  // namespace shockdev
