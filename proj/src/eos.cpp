#include "shockdev/eos.hpp"

#include <algorithm>
#include <cmath>

// Boost 1.74's pchip calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <fstream>
#include <numbers>
#include <sstream>

#include "shockdev/errors.hpp"
#include "shockdev/numerics.hpp"

namespace shockdev {

namespace {

constexpr double kQuadTol = 1e-12;
constexpr std::size_t kTableSize = 4001;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

BarotropicEos::BarotropicEos(std::string label, double rho_min, double rho_max, double rho_ref,
                             double h_ref)
    : label_(std::move(label)), rho_min_(rho_min), rho_max_(rho_max), rho_ref_(rho_ref), h_ref_(h_ref) {
  if (!(rho_min > 0 && rho_max > rho_min))
    throw OutOfRange("admissible range [" + fmt(rho_min) + ", " + fmt(rho_max) + "] is empty");
  if (!(rho_ref >= rho_min && rho_ref <= rho_max))
    throw OutOfRange("reference density " + fmt(rho_ref) + " outside admissible range");
  if (!(h_ref > 0)) throw OutOfRange("reference enthalpy must be positive");
}

void BarotropicEos::finalize() {
  sigma_ref_ = (rho_ref_ + pressure(rho_ref_)) / h_ref_;
  constexpr int samples = 257;
  const double lo = std::log(rho_min_);
  const double hi = std::log(rho_max_);
  for (int k = 0; k < samples; ++k) {
    const double rho = std::exp(lo + (hi - lo) * k / (samples - 1));
    const double eta2 = dpressure(std::clamp(rho, rho_min_, rho_max_));
    if (!(eta2 > 0 && eta2 < 1))
      throw OutOfRange(label_ + ": eta^2 = " + fmt(eta2) + " at rho = " + fmt(rho));
    if (!(pressure(std::clamp(rho, rho_min_, rho_max_)) > 0))
      throw OutOfRange(label_ + ": non-positive pressure at rho = " + fmt(rho));
  }
}

void BarotropicEos::check_rho(double rho) const {
  if (!(rho >= rho_min_ && rho <= rho_max_))
    throw OutOfRange(label_ + ": rho = " + fmt(rho) + " outside [" + fmt(rho_min_) + ", " +
                     fmt(rho_max_) + "]");
}

double BarotropicEos::sound_speed_sq(double rho) const {
  check_rho(rho);
  const double eta2 = dpressure(rho);
  if (!(eta2 > 0 && eta2 < 1)) throw OutOfRange(label_ + ": eta^2 = " + fmt(eta2) + " not in (0,1)");
  return eta2;
}

const BarotropicEos::InverseTable& BarotropicEos::table() const {
  std::call_once(table_once_, [this] {
    auto tab = std::make_unique<InverseTable>();
    const double lo = std::log(rho_min_);
    const double hi = std::log(rho_max_);
    tab->rho.resize(kTableSize);
    for (std::size_t k = 0; k < kTableSize; ++k)
      tab->rho[k] = std::exp(lo + (hi - lo) * static_cast<double>(k) / (kTableSize - 1));
    tab->rho.front() = rho_min_;
    tab->rho.back() = rho_max_;
    tab->rho_tilde.assign(kTableSize, 0.0);
    tab->log_sigma.assign(kTableSize, 0.0);
    auto drt = [this](double r) { return std::sqrt(dpressure(r)) / (r + pressure(r)); };
    auto dls = [this](double r) { return 1.0 / (r + pressure(r)); };
    for (std::size_t k = 1; k < kTableSize; ++k) {
      const double a = tab->rho[k - 1], b = tab->rho[k];
      tab->rho_tilde[k] = tab->rho_tilde[k - 1] + numerics::adaptive_simpson(drt, a, b, 1e-3 * kQuadTol);
      tab->log_sigma[k] = tab->log_sigma[k - 1] + numerics::adaptive_simpson(dls, a, b, 1e-3 * kQuadTol);
    }
    // Shift so that the reference state sits at zero.
    const std::size_t j = segment(tab->rho, rho_ref_);
    const double rt_ref = tab->rho_tilde[j] + numerics::adaptive_simpson(drt, tab->rho[j], rho_ref_, kQuadTol);
    const double ls_ref = tab->log_sigma[j] + numerics::adaptive_simpson(dls, tab->rho[j], rho_ref_, kQuadTol);
    for (std::size_t k = 0; k < kTableSize; ++k) {
      tab->rho_tilde[k] -= rt_ref;
      tab->log_sigma[k] -= ls_ref;
    }
    table_ = std::move(tab);
  });
  return *table_;
}

std::size_t BarotropicEos::segment(const std::vector<double>& knots, double x) const {
  auto it = std::upper_bound(knots.begin(), knots.end(), x);
  if (it == knots.begin()) return 0;
  const std::size_t k = static_cast<std::size_t>(it - knots.begin()) - 1;
  return std::min(k, knots.size() - 2);
}

double BarotropicEos::rho_tilde_of_rho(double rho) const {
  check_rho(rho);
  const auto& tab = table();
  const std::size_t k = segment(tab.rho, rho);
  auto drt = [this](double r) { return std::sqrt(dpressure(r)) / (r + pressure(r)); };
  return tab.rho_tilde[k] + numerics::adaptive_simpson(drt, tab.rho[k], rho, kQuadTol);
}

double BarotropicEos::log_sigma_ratio(double rho) const {
  check_rho(rho);
  const auto& tab = table();
  const std::size_t k = segment(tab.rho, rho);
  auto dls = [this](double r) { return 1.0 / (r + pressure(r)); };
  return tab.log_sigma[k] + numerics::adaptive_simpson(dls, tab.rho[k], rho, kQuadTol);
}

double BarotropicEos::rho_of_rho_tilde(double rho_tilde) const {
  const auto& tab = table();
  if (!(rho_tilde >= tab.rho_tilde.front() && rho_tilde <= tab.rho_tilde.back()))
    throw OutOfRange(label_ + ": rho_tilde = " + fmt(rho_tilde) + " outside admissible range");
  const std::size_t k = segment(tab.rho_tilde, rho_tilde);
  const double lo = tab.rho[k], hi = tab.rho[k + 1];
  const double s = (rho_tilde - tab.rho_tilde[k]) / (tab.rho_tilde[k + 1] - tab.rho_tilde[k]);
  double rho = std::exp(std::log(lo) + s * (std::log(hi) - std::log(lo)));
  auto drt = [this](double r) { return std::sqrt(dpressure(r)) / (r + pressure(r)); };
  for (int it = 0; it < 50; ++it) {
    const double residual = tab.rho_tilde[k] + numerics::adaptive_simpson(drt, lo, rho, kQuadTol) - rho_tilde;
    const double step = residual / drt(rho);
    rho = std::clamp(rho - step, lo, hi);
    if (std::abs(step) <= 4e-16 * rho) break;
  }
  return rho;
}

double BarotropicEos::rapidity_offset(double rho_tilde0, double increment) const {
  const double span = increment;
  if (span == 0.0) return 0.0;
  const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(span) / 0.05)));
  auto integrand = [this](double rt) {
    const double rho = rho_of_rho_tilde(rt);
    const double eta2 = dpressure(rho);
    return deta_drho_tilde(rt) / (1.0 - eta2);
  };
  return numerics::gauss_integrate(integrand, rho_tilde0, rho_tilde0 + increment, panels);
}

double BarotropicEos::rho_tilde_min() const { return rho_tilde_of_rho(rho_min_); }
double BarotropicEos::rho_tilde_max() const { return rho_tilde_of_rho(rho_max_); }

double BarotropicEos::sigma_of_rho(double rho) const {
  return sigma_ref_ * std::exp(log_sigma_ratio(rho));
}

double BarotropicEos::h_tilde_of_rho(double rho) const {
  return (rho + pressure(rho)) / sigma_of_rho(rho);
}

double BarotropicEos::rho_of_h_tilde(double h_tilde) const {
  if (!(h_tilde > 0)) throw OutOfRange(label_ + ": h_tilde must be positive");
  const double h_lo = h_tilde_of_rho(rho_min_);
  const double h_hi = h_tilde_of_rho(rho_max_);
  if (!(h_tilde >= h_lo && h_tilde <= h_hi))
    throw OutOfRange(label_ + ": h_tilde = " + fmt(h_tilde) + " outside admissible range");
  // h_tilde is increasing in rho; bisect on log rho then polish with Newton.
  auto residual = [&](double lr) {
    return std::log(h_tilde_of_rho(std::clamp(std::exp(lr), rho_min_, rho_max_))) - std::log(h_tilde);
  };
  double lr = numerics::bisect(residual, std::log(rho_min_), std::log(rho_max_), 1e-13);
  for (int it = 0; it < 3; ++it) {
    const double rho = std::clamp(std::exp(lr), rho_min_, rho_max_);
    const double slope = dpressure(rho) * rho / (rho + pressure(rho));  // d ln h / d ln rho
    lr -= residual(std::log(rho)) / slope;
    lr = std::clamp(lr, std::log(rho_min_), std::log(rho_max_));
  }
  return std::clamp(std::exp(lr), rho_min_, rho_max_);
}

double BarotropicEos::riemann_potential(double h_tilde) const {
  return rho_tilde_of_rho(rho_of_h_tilde(h_tilde));
}

double BarotropicEos::deta_drho_tilde(double rho_tilde) const {
  const double rho = rho_of_rho_tilde(rho_tilde);
  const double eta2 = sound_speed_sq(rho);
  if (auto d2 = d2pressure(rho)) return *d2 * (rho + pressure(rho)) / (2.0 * eta2);
  const double h = 1e-4 * std::abs(rho_tilde) + 1e-6;
  auto eta = [this](double rt) { return std::sqrt(dpressure(rho_of_rho_tilde(rt))); };
  return numerics::central_diff4(eta, rho_tilde, h);
}

double BarotropicEos::mu_coefficient(double rho_tilde) const {
  const double rho = rho_of_rho_tilde(rho_tilde);
  return deta_drho_tilde(rho_tilde) + 1.0 - sound_speed_sq(rho);
}

double BarotropicEos::big_g(double big_h) const {
  if (!(big_h > 0)) throw OutOfRange(label_ + ": H must be positive");
  const double rho = rho_of_h_tilde(std::sqrt(big_h));
  return sigma_of_rho(rho) / std::sqrt(big_h);
}

Thermo BarotropicEos::thermo(double rho_tilde) const {
  Thermo th;
  th.rho_tilde = rho_tilde;
  th.rho = rho_of_rho_tilde(rho_tilde);
  check_rho(th.rho);
  th.p = pressure(th.rho);
  th.w = th.rho + th.p;
  th.eta2 = sound_speed_sq(th.rho);
  th.eta = std::sqrt(th.eta2);
  th.sigma = sigma_of_rho(th.rho);
  th.h_tilde = th.w / th.sigma;
  th.big_g = th.sigma / th.h_tilde;
  th.deta = deta_drho_tilde(rho_tilde);
  th.mu = th.deta + 1.0 - th.eta2;
  return th;
}

// ---------------------------------------------------------------- radiation

RadiationEos::RadiationEos(double rho_ref, double h_ref, double rho_min, double rho_max)
    : BarotropicEos("radiation", rho_min, rho_max, rho_ref, h_ref) {
  finalize();
}

// eta is constant, so rho_tilde = ln(h/h_ref)/eta and h ~ rho^(1/4).
double RadiationEos::rho_tilde_of_rho(double rho) const {
  check_rho(rho);
  return std::numbers::sqrt3 / 4.0 * std::log(rho / rho_ref());
}

double RadiationEos::log_sigma_ratio(double rho) const {
  check_rho(rho);
  return 0.75 * std::log(rho / rho_ref());
}

double RadiationEos::rho_of_rho_tilde(double rho_tilde) const {
  const double rho = rho_ref() * std::exp(4.0 * rho_tilde / std::numbers::sqrt3);
  check_rho(rho);
  return rho;
}

// -------------------------------------------------------------------- poly2

namespace {
double poly2_rho_max(double k) {
  if (!(k > 0)) throw OutOfRange("poly2: k must be positive");
  return 0.5 / k * (1.0 - 1e-6);
}
}  // namespace

Poly2Eos::Poly2Eos(double k, double rho_ref, double h_ref, double rho_min)
    : BarotropicEos("poly2", rho_min, poly2_rho_max(k), rho_ref, h_ref), k_(k) {
  ref_angle_ = std::atan(std::sqrt(k_ * rho_ref));
  finalize();
}

// With eta = sqrt(2 k rho): rho_tilde = 2 sqrt2 (atan(eta/sqrt2) - atan(eta_ref/sqrt2)).
double Poly2Eos::rho_tilde_of_rho(double rho) const {
  check_rho(rho);
  return 2.0 * std::numbers::sqrt2 * (std::atan(std::sqrt(k_ * rho)) - ref_angle_);
}

double Poly2Eos::log_sigma_ratio(double rho) const {
  check_rho(rho);
  return std::log(rho / rho_ref()) - std::log1p(k_ * rho) + std::log1p(k_ * rho_ref());
}

double Poly2Eos::angle_of(double rho_tilde) const {
  return rho_tilde / (2.0 * std::numbers::sqrt2) + ref_angle_;
}

double Poly2Eos::rho_of_rho_tilde(double rho_tilde) const {
  const double angle = angle_of(rho_tilde);
  if (!(angle > 0 && angle < 0.5 * std::numbers::pi))
    throw OutOfRange("poly2: rho_tilde = " + fmt(rho_tilde) + " outside admissible range");
  const double t = std::tan(angle);
  const double rho = t * t / k_;
  check_rho(rho);
  return rho;
}

double Poly2Eos::rapidity_offset(double rho_tilde0, double increment) const {
  const double b = angle_of(rho_tilde0);
  const double a = angle_of(rho_tilde0 + increment);
  const double eta = std::numbers::sqrt2 * std::tan(a);
  const double eta0 = std::numbers::sqrt2 * std::tan(b);
  const double diff =
      std::numbers::sqrt2 * std::sin(increment / (2.0 * std::numbers::sqrt2)) / (std::cos(a) * std::cos(b));
  return std::atanh(diff / (1.0 - eta * eta0));
}

// ----------------------------------------------------------------- function

FunctionEos::FunctionEos(std::string label, Fn p, Fn dp, std::optional<Fn> d2p, double rho_min,
                         double rho_max, double rho_ref, double h_ref)
    : BarotropicEos(std::move(label), rho_min, rho_max, rho_ref, h_ref),
      p_(std::move(p)),
      dp_(std::move(dp)),
      d2p_(std::move(d2p)) {
  finalize();
}

std::optional<double> FunctionEos::d2pressure(double rho) const {
  if (d2p_) return (*d2p_)(rho);
  return std::nullopt;
}

// -------------------------------------------------------------------- table

struct TableEos::Impl {
  boost::math::interpolators::pchip<std::vector<double>> spline;
  Impl(std::vector<double> rho, std::vector<double> p) : spline(std::move(rho), std::move(p)) {}
};

namespace {
std::pair<double, double> table_bounds(const std::vector<double>& rho, const std::vector<double>& p) {
  if (rho.size() < 4 || rho.size() != p.size())
    throw ConfigError("table EOS needs at least four (rho, p) rows");
  for (std::size_t i = 1; i < rho.size(); ++i)
    if (!(rho[i] > rho[i - 1])) throw ConfigError("table EOS densities must increase strictly");
  return {rho.front(), rho.back()};
}
}  // namespace

TableEos::TableEos(std::vector<double> rho, std::vector<double> p, double rho_ref, double h_ref)
    : BarotropicEos("table", table_bounds(rho, p).first, table_bounds(rho, p).second, rho_ref, h_ref),
      impl_(std::make_shared<Impl>(std::move(rho), std::move(p))) {
  finalize();
}

std::shared_ptr<TableEos> TableEos::from_file(const std::string& path, double rho_ref, double h_ref) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open EOS table " + path);
  std::vector<double> rho, p;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream row(line);
    double a, b;
    if (!(row >> a)) continue;
    if (!(row >> b)) throw ConfigError("EOS table row has one column: " + line);
    rho.push_back(a);
    p.push_back(b);
  }
  return std::make_shared<TableEos>(std::move(rho), std::move(p), rho_ref, h_ref);
}

double TableEos::pressure(double rho) const { return impl_->spline(rho); }
double TableEos::dpressure(double rho) const { return impl_->spline.prime(rho); }

// ------------------------------------------------------------------- oracle

double riemann_potential_quadrature(const BarotropicEos& eos, double h_tilde) {
  auto inv_w = [&eos](double r) { return 1.0 / (r + eos.pressure(r)); };
  auto h_of = [&](double rho) {
    const double ls = numerics::adaptive_simpson(inv_w, eos.rho_ref(), rho, kQuadTol);
    return (rho + eos.pressure(rho)) / (eos.sigma_ref() * std::exp(ls));
  };
  auto residual = [&](double lr) {
    return std::log(h_of(std::clamp(std::exp(lr), eos.rho_min(), eos.rho_max()))) - std::log(h_tilde);
  };
  const double rho = std::clamp(std::exp(
      numerics::bisect(residual, std::log(eos.rho_min()), std::log(eos.rho_max()), 1e-15)), eos.rho_min(), eos.rho_max());
  auto drt = [&eos](double r) { return std::sqrt(eos.dpressure(r)) / (r + eos.pressure(r)); };
  return numerics::adaptive_simpson(drt, eos.rho_ref(), rho, kQuadTol);
}

}  // namespace shockdev
