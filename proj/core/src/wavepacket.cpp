#include "lpai/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "lpai/constants.hpp"
#include "lpai/errors.hpp"

namespace lpai::wavepacket {

namespace {

constexpr const char* kModule = "wavepacket";

void require_coverage(const VelocityGrid& grid, double lo, double hi, const char* what) {
  if (grid.v_min() > lo || grid.v_max() < hi) {
    throw CoverageError(kModule, std::string("velocity grid does not cover ") + what);
  }
}

}  // namespace

void ThermalParams::validate() const {
  if (!(mass > 0.0)) throw DomainError(kModule, "mass must be positive");
  if (!(temperature > 0.0)) throw DomainError(kModule, "temperature must be positive");
}

double ThermalParams::thermal_speed() const {
  return std::sqrt(2.0 * constants::boltzmann * temperature / mass);
}

double ThermalParams::velocity_sigma() const {
  return std::sqrt(constants::boltzmann * temperature / mass);
}

double ThermalParams::momentum_sigma() const {
  return std::sqrt(mass * constants::boltzmann * temperature);
}

VelocityGrid::VelocityGrid(double v_min, double v_max, std::size_t n_points)
    : v_min_(v_min), v_max_(v_max), n_(n_points) {
  if (!(v_min < v_max) || !std::isfinite(v_min) || !std::isfinite(v_max)) {
    throw DomainError(kModule, "velocity grid needs v_min < v_max");
  }
  if (n_points < 3) throw DomainError(kModule, "velocity grid needs at least 3 points");
}

VelocityGrid VelocityGrid::symmetric(double half_span, std::size_t n_points) {
  return {-half_span, half_span, n_points};
}

double VelocityGrid::at(std::size_t i) const {
  // The last node is pinned to v_max to avoid accumulated rounding.
  if (i + 1 == n_) return v_max_;
  return v_min_ + static_cast<double>(i) * spacing();
}

std::vector<double> VelocityGrid::points() const {
  std::vector<double> v(n_);
  for (std::size_t i = 0; i < n_; ++i) v[i] = at(i);
  return v;
}

double trapezoid(std::span<const double> y, double h) {
  if (y.size() < 2) return 0.0;
  double interior = 0.0;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) interior += y[i];
  return h * (interior + 0.5 * (y.front() + y.back()));
}

Density::Density(VelocityGrid grid, std::vector<double> values, bool signed_ok, bool normalized)
    : grid_(grid), values_(std::move(values)), signed_ok_(signed_ok), normalized_(normalized) {
  if (values_.size() != grid_.size()) throw DomainError(kModule, "density size does not match grid");
  for (double x : values_) {
    if (!std::isfinite(x)) throw DomainError(kModule, "density has non-finite samples");
    if (!signed_ok_ && x < 0.0) throw DomainError(kModule, "density has negative samples");
  }
}

double Density::integral() const { return trapezoid(values_, grid_.spacing()); }

double branch_offset(double k_eff, double mass) {
  return constants::hbar * k_eff / (2.0 * mass);
}

double maxwell_boltzmann_pdf(const ThermalParams& p, double v) {
  const double kt = constants::boltzmann * p.temperature;
  return std::sqrt(p.mass / (2.0 * constants::pi * kt)) * std::exp(-p.mass * v * v / (2.0 * kt));
}

Density maxwell_boltzmann(const ThermalParams& params, const VelocityGrid& grid) {
  params.validate();
  const double span = kMinimumSpanThermalSpeeds * params.thermal_speed();
  require_coverage(grid, -span, span, "+-5 thermal speeds");
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = maxwell_boltzmann_pdf(params, grid.at(i));
  return {grid, std::move(f), false, true};
}

PostSelectedPacket exact_postselected(double theta, double phi, double k_eff,
                                      const ThermalParams& params, const VelocityGrid& grid) {
  params.validate();
  const double dv = branch_offset(k_eff, params.mass);
  const double span = kMinimumSpanThermalSpeeds * params.thermal_speed() + std::abs(dv);
  require_coverage(grid, -span, span, "both shifted packets");

  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);
  const std::complex<double> phase = std::polar(1.0, phi);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  std::vector<double> rho(grid.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double v = grid.at(i);
    const double a_minus = std::sqrt(maxwell_boltzmann_pdf(params, v - dv));
    const double a_plus = std::sqrt(maxwell_boltzmann_pdf(params, v + dv));
    const std::complex<double> c = (cos_t * a_minus - phase * (sin_t * a_plus)) * inv_sqrt2;
    rho[i] = std::norm(c);
  }
  const double p = trapezoid(rho, grid.spacing());
  if (!(p >= kMinimumSuccessProbability)) {
    throw SingularPostSelection(kModule, "post-selection success probability below 1e-12");
  }
  for (double& x : rho) x /= p;
  return {Density{grid, std::move(rho), false, true}, p};
}

FirstOrderPacket firstorder_postselected(double theta, double phi, double k_eff,
                                         const ThermalParams& params, const VelocityGrid& grid) {
  params.validate();
  const double span = kMinimumSpanThermalSpeeds * params.thermal_speed();
  require_coverage(grid, -span, span, "+-5 thermal speeds");

  const qdyn::WeakValue w = qdyn::pointer_weak_value(theta, phi);
  const double slope = constants::hbar * k_eff * w.re / (constants::boltzmann * params.temperature);

  std::vector<double> signed_values(grid.size());
  std::vector<double> modulus(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = grid.at(i);
    signed_values[i] = maxwell_boltzmann_pdf(params, v) * (1.0 - slope * v);
    modulus[i] = std::abs(signed_values[i]);
  }
  const double area = trapezoid(modulus, grid.spacing());
  if (!(area > 0.0)) throw DomainError(kModule, "first-order profile has zero area");
  for (double& x : modulus) x /= area;

  return {Density{grid, std::move(signed_values), true, false},
          Density{grid, std::move(modulus), false, true}, w, slope};
}

double firstorder_centroid_closed_form(double theta, double phi, double k_eff, double mass) {
  return -(constants::hbar * k_eff / mass) * qdyn::pointer_weak_value(theta, phi).re;
}

double centroid(const Density& d) {
  const auto& y = d.values();
  std::vector<double> vy(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) vy[i] = d.grid().at(i) * y[i];
  const double h = d.grid().spacing();
  const double mass = trapezoid(y, h);
  if (mass == 0.0 || !std::isfinite(mass)) throw DomainError(kModule, "centroid of a zero-integral density");
  return trapezoid(vy, h) / mass;
}

double amplification_factor(const Density& exact, double k_eff, double mass) {
  if (k_eff == 0.0) throw DomainError(kModule, "amplification factor undefined for k_eff = 0");
  return std::abs(centroid(exact)) / std::abs(branch_offset(k_eff, mass));
}

}  // namespace lpai::wavepacket
