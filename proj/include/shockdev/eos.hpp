#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace shockdev {

// Thermodynamic quantities at one state, all with the per-particle mass set to 1
// so that tilded and untilded enthalpies coincide.
struct Thermo {
  double rho_tilde = 0;  // Riemann potential
  double rho = 0;        // energy density
  double p = 0;          // pressure
  double w = 0;          // rho + p
  double eta2 = 0;       // dp/drho
  double eta = 0;        // sound speed
  double sigma = 0;      // particle density
  double h_tilde = 0;    // (rho + p) / sigma
  double big_g = 0;      // sigma / h_tilde
  double deta = 0;       // d eta / d rho_tilde
  double mu = 0;         // deta + 1 - eta^2
};

// Barotropic equation of state p(rho) on an admissible interval [rho_min, rho_max].
// The reference state (rho_ref, h_ref) fixes rho_tilde(rho_ref) = 0 and
// sigma_ref = (rho_ref + p_ref) / h_ref. Instances are immutable once built.
class BarotropicEos {
 public:
  BarotropicEos(std::string label, double rho_min, double rho_max, double rho_ref = 1.0,
                double h_ref = 1.0);
  virtual ~BarotropicEos() = default;
  BarotropicEos(const BarotropicEos&) = delete;
  BarotropicEos& operator=(const BarotropicEos&) = delete;

  virtual double pressure(double rho) const = 0;
  virtual double dpressure(double rho) const = 0;
  // Second derivative of p, when the instance knows it in closed form.
  virtual std::optional<double> d2pressure(double /*rho*/) const { return std::nullopt; }

  // Closed-form hooks. The defaults integrate numerically.
  virtual double rho_tilde_of_rho(double rho) const;
  virtual double log_sigma_ratio(double rho) const;  // ln(sigma / sigma_ref)
  virtual double rho_of_rho_tilde(double rho_tilde) const;
  // artanh(eta(rt0 + increment)) - artanh(eta(rt0)), accurate for small increments.
  virtual double rapidity_offset(double rho_tilde0, double increment) const;

  const std::string& label() const { return label_; }
  double rho_min() const { return rho_min_; }
  double rho_max() const { return rho_max_; }
  double rho_ref() const { return rho_ref_; }
  double h_ref() const { return h_ref_; }
  double sigma_ref() const { return sigma_ref_; }
  bool contains(double rho) const { return rho >= rho_min_ && rho <= rho_max_; }
  double rho_tilde_min() const;
  double rho_tilde_max() const;

  double sound_speed_sq(double rho) const;
  double sigma_of_rho(double rho) const;
  double h_tilde_of_rho(double rho) const;
  double rho_of_h_tilde(double h_tilde) const;
  double riemann_potential(double h_tilde) const;
  double deta_drho_tilde(double rho_tilde) const;
  double mu_coefficient(double rho_tilde) const;
  double big_g(double big_h) const;
  Thermo thermo(double rho_tilde) const;

 protected:
  // Fixes sigma_ref and samples the admissible range, throwing OutOfRange if
  // 0 < eta^2 < 1 or p > 0 fails anywhere. Derived constructors call this last.
  void finalize();
  void check_rho(double rho) const;

 private:
  struct InverseTable {
    std::vector<double> rho;
    std::vector<double> rho_tilde;
    std::vector<double> log_sigma;
  };
  const InverseTable& table() const;
  std::size_t segment(const std::vector<double>& knots, double x) const;

  std::string label_;
  double rho_min_, rho_max_, rho_ref_, h_ref_;
  double sigma_ref_ = 0;
  mutable std::once_flag table_once_;
  mutable std::unique_ptr<InverseTable> table_;
};

using EosPtr = std::shared_ptr<const BarotropicEos>;

// p = rho / 3.
class RadiationEos final : public BarotropicEos {
 public:
  explicit RadiationEos(double rho_ref = 1.0, double h_ref = 1.0, double rho_min = 1e-10,
                        double rho_max = 1e10);
  double pressure(double rho) const override { return rho / 3.0; }
  double dpressure(double) const override { return 1.0 / 3.0; }
  std::optional<double> d2pressure(double) const override { return 0.0; }
  double rho_tilde_of_rho(double rho) const override;
  double log_sigma_ratio(double rho) const override;
  double rho_of_rho_tilde(double rho_tilde) const override;
  double rapidity_offset(double, double) const override { return 0.0; }
};

// p = k rho^2, restricted to 2 k rho < 1.
class Poly2Eos final : public BarotropicEos {
 public:
  explicit Poly2Eos(double k = 0.1, double rho_ref = 1.0, double h_ref = 1.0,
                    double rho_min = 1e-8);
  double k() const { return k_; }
  double pressure(double rho) const override { return k_ * rho * rho; }
  double dpressure(double rho) const override { return 2.0 * k_ * rho; }
  std::optional<double> d2pressure(double) const override { return 2.0 * k_; }
  double rho_tilde_of_rho(double rho) const override;
  double log_sigma_ratio(double rho) const override;
  double rho_of_rho_tilde(double rho_tilde) const override;
  double rapidity_offset(double rho_tilde0, double increment) const override;

 private:
  double angle_of(double rho_tilde) const;
  double k_;
  double ref_angle_;
};

// User-supplied p(rho) and p'(rho), optionally p''(rho). All thermodynamic
// integrals fall back to quadrature.
class FunctionEos final : public BarotropicEos {
 public:
  using Fn = std::function<double(double)>;
  FunctionEos(std::string label, Fn p, Fn dp, std::optional<Fn> d2p, double rho_min,
              double rho_max, double rho_ref = 1.0, double h_ref = 1.0);
  double pressure(double rho) const override { return p_(rho); }
  double dpressure(double rho) const override { return dp_(rho); }
  std::optional<double> d2pressure(double rho) const override;

 private:
  Fn p_, dp_;
  std::optional<Fn> d2p_;
};

// Two-column (rho, p) table with monotone cubic interpolation.
class TableEos final : public BarotropicEos {
 public:
  TableEos(std::vector<double> rho, std::vector<double> p, double rho_ref, double h_ref = 1.0);
  static std::shared_ptr<TableEos> from_file(const std::string& path, double rho_ref,
                                             double h_ref = 1.0);
  double pressure(double rho) const override;
  double dpressure(double rho) const override;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

// Reference quadrature of the Riemann potential straight from rho_ref, ignoring
// any closed form. Used to cross-check instances.
double riemann_potential_quadrature(const BarotropicEos& eos, double h_tilde);

}  // namespace shockdev
