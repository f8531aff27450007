#include "lpai/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lpai/constants.hpp"
#include "lpai/errors.hpp"

namespace lpai::spectrum {

namespace {

constexpr const char* kModule = "spectrum";

void require_doppler_coverage(const FrequencyGrid& g, const LineParams& line) {
  const double need = kMinimumSpanDopplerWidths * line.doppler_half_width();
  if (g.detuning_min() > -need || g.detuning_max() < need) {
    throw CoverageError(kModule, "frequency grid must span +-4 Doppler half-widths");
  }
}

}  // namespace

FrequencyGrid::FrequencyGrid(double detuning_min, double detuning_max, std::size_t n_points)
    : min_(detuning_min), max_(detuning_max), n_(n_points) {
  if (!(detuning_min < detuning_max) || !std::isfinite(detuning_min) || !std::isfinite(detuning_max)) {
    throw DomainError(kModule, "frequency grid needs detuning_min < detuning_max");
  }
  if (n_points < 3) throw DomainError(kModule, "frequency grid needs at least 3 points");
}

FrequencyGrid FrequencyGrid::symmetric(double half_span, std::size_t n_points) {
  return {-half_span, half_span, n_points};
}

double FrequencyGrid::at(std::size_t i) const {
  if (i + 1 == n_) return max_;
  return min_ + static_cast<double>(i) * spacing();
}

long FrequencyGrid::zero_index() const {
  const double x = -min_ / spacing();
  const double r = std::round(x);
  if (r < 0.0 || r > static_cast<double>(n_ - 1) || std::abs(x - r) > 1e-9) return -1;
  return static_cast<long>(r);
}

void LineParams::validate() const {
  if (!(probe_frequency > 0.0)) throw DomainError(kModule, "probe frequency must be positive");
  if (!(natural_linewidth > 0.0)) throw DomainError(kModule, "natural linewidth must be positive");
  if (!(thermal_speed > 0.0)) throw DomainError(kModule, "thermal speed must be positive");
}

double LineParams::doppler_half_width() const {
  return probe_frequency * thermal_speed / constants::speed_of_light;
}

double LineParams::doppler_fwhm() const {
  return 2.0 * std::sqrt(std::log(2.0)) * doppler_half_width();
}

double SpectrumProfile::area() const {
  return wavepacket::trapezoid(intensity, grid.spacing());
}

double SpectrumProfile::max() const {
  return intensity.empty() ? 0.0 : *std::max_element(intensity.begin(), intensity.end());
}

SpectrumProfile max_normalized(SpectrumProfile p) {
  const double m = p.max();
  if (!(m > 0.0)) throw DomainError(kModule, "cannot max-normalize an all-zero profile");
  for (double& x : p.intensity) x /= m;
  p.max_normalized = true;
  return p;
}

double velocity_to_detuning(double v, double probe_frequency) {
  return probe_frequency * v / constants::speed_of_light;
}

double detuning_to_velocity(double detuning, double probe_frequency) {
  return constants::speed_of_light * detuning / probe_frequency;
}

std::vector<double> doppler_profile_signed(double theta, double phi, double k_eff,
                                           const wavepacket::ThermalParams& thermal,
                                           const LineParams& line, const FrequencyGrid& fgrid) {
  thermal.validate();
  line.validate();
  require_doppler_coverage(fgrid, line);
  const qdyn::WeakValue w = qdyn::pointer_weak_value(theta, phi);
  const double kt = constants::boltzmann * thermal.temperature;
  const double slope = constants::hbar * k_eff * w.re / kt;
  const double speed = line.thermal_speed;

  std::vector<double> out(fgrid.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = detuning_to_velocity(fgrid.at(i), line.probe_frequency);
    const double g = std::exp(-(v / speed) * (v / speed));
    out[i] = g - slope * v * g;
  }
  return out;
}

SpectrumProfile doppler_profile(double theta, double phi, double k_eff,
                                const wavepacket::ThermalParams& thermal, const LineParams& line,
                                const FrequencyGrid& fgrid) {
  std::vector<double> s = doppler_profile_signed(theta, phi, k_eff, thermal, line, fgrid);
  for (double& x : s) x = std::abs(x);
  return max_normalized(SpectrumProfile{fgrid, std::move(s), false});
}

SpectrumProfile doppler_profile_via_wavepacket(double theta, double phi, double k_eff,
                                               const wavepacket::ThermalParams& thermal,
                                               const LineParams& line, const FrequencyGrid& fgrid) {
  line.validate();
  require_doppler_coverage(fgrid, line);
  const wavepacket::VelocityGrid vgrid(detuning_to_velocity(fgrid.detuning_min(), line.probe_frequency),
                                       detuning_to_velocity(fgrid.detuning_max(), line.probe_frequency),
                                       fgrid.size());
  const auto packet = wavepacket::firstorder_postselected(theta, phi, k_eff, thermal, vgrid);
  const double jacobian = constants::speed_of_light / line.probe_frequency;
  std::vector<double> out(packet.density.values());
  for (double& x : out) x *= jacobian;
  return max_normalized(SpectrumProfile{fgrid, std::move(out), false});
}

SpectrumProfile lorentzian_kernel(double gamma_fwhm, const FrequencyGrid& fgrid) {
  if (!(gamma_fwhm > 0.0)) throw DomainError(kModule, "linewidth must be positive");
  if (fgrid.spacing() > kResolutionFraction * gamma_fwhm) {
    throw ResolutionError(kModule, "frequency grid spacing exceeds linewidth / 10");
  }
  const double half = 0.5 * gamma_fwhm;
  const double norm = gamma_fwhm / (2.0 * constants::pi);
  std::vector<double> k(fgrid.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double d = fgrid.at(i);
    k[i] = norm / (d * d + half * half);
  }
  return {fgrid, std::move(k), false};
}

double lorentzian_window_mass(double gamma_fwhm, double half_span) {
  return 2.0 / constants::pi * std::atan(2.0 * half_span / gamma_fwhm);
}

SpectrumProfile convolve(const SpectrumProfile& profile, const SpectrumProfile& kernel, EdgeMode mode) {
  if (!(profile.grid == kernel.grid)) throw DomainError(kModule, "convolution grids differ");
  const long z = kernel.grid.zero_index();
  if (z < 0) throw DomainError(kModule, "kernel grid has no zero-detuning node");

  const std::size_t n = profile.grid.size();
  const double h = profile.grid.spacing();
  const auto& p = profile.intensity;
  const auto& k = kernel.intensity;

  // prefix[m] = sum of k[0 .. m-1]
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t m = 0; m < n; ++m) prefix[m + 1] = prefix[m] + k[m];

  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (p[j] == 0.0) continue;
    // Output index i uses kernel index i - j + z; valid i are those mapping into [0, n).
    const long shift = z - static_cast<long>(j);
    const long i_lo = std::max(0L, -shift);
    const long i_hi = std::min(static_cast<long>(n) - 1, static_cast<long>(n) - 1 - shift);
    if (i_lo > i_hi) continue;
    double weight = h * p[j];
    if (mode == EdgeMode::ConserveMass) {
      // Trapezoid weights on both ends, so area() of the output equals area()
      // of the input exactly.
      double in_grid = prefix[static_cast<std::size_t>(i_hi + shift + 1)] -
                       prefix[static_cast<std::size_t>(i_lo + shift)];
      if (i_lo == 0) in_grid -= 0.5 * k[static_cast<std::size_t>(shift)];
      if (i_hi == static_cast<long>(n) - 1) in_grid -= 0.5 * k[static_cast<std::size_t>(i_hi + shift)];
      in_grid *= h;
      if (!(in_grid > 0.0)) continue;
      if (j == 0 || j + 1 == n) weight *= 0.5;
      weight /= in_grid;
    }
    for (long i = i_lo; i <= i_hi; ++i) {
      out[static_cast<std::size_t>(i)] += weight * k[static_cast<std::size_t>(i + shift)];
    }
  }
  return {profile.grid, std::move(out), false};
}

double spectral_centroid(const SpectrumProfile& profile) {
  const auto& y = profile.intensity;
  std::vector<double> dy(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) dy[i] = profile.grid.at(i) * y[i];
  const double h = profile.grid.spacing();
  const double total = wavepacket::trapezoid(y, h);
  if (total == 0.0 || !std::isfinite(total)) throw DomainError(kModule, "centroid of a zero-intensity profile");
  return wavepacket::trapezoid(dy, h) / total;
}

FwhmResult fwhm(const SpectrumProfile& profile) {
  const auto& y = profile.intensity;
  const std::size_t n = y.size();
  const double half = 0.5 * profile.max();
  if (!(half > 0.0)) throw DomainError(kModule, "FWHM of a zero profile");
  if (y.front() >= half || y.back() >= half) {
    throw DomainError(kModule, "profile does not fall below half maximum inside the grid");
  }
  auto crossing = [&](std::size_t i) {
    // Linear interpolation of the half-maximum crossing between nodes i and i + 1.
    const double t = (half - y[i]) / (y[i + 1] - y[i]);
    return profile.grid.at(i) + t * profile.grid.spacing();
  };

  int crossings = 0;
  std::size_t first = n, last = n;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if ((y[i] >= half) != (y[i + 1] >= half)) {
      ++crossings;
      if (first == n) first = i;
      last = i;
    }
  }
  return {crossing(last) - crossing(first), crossings > 2, crossings};
}

BimodalityResult bimodality(const SpectrumProfile& profile, double prominence_fraction) {
  const auto& y = profile.intensity;
  const std::size_t n = y.size();
  const double threshold = prominence_fraction * profile.max();
  BimodalityResult result{false, {}};
  if (n < 3) return result;

  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
    double left_min = y[i];
    for (std::size_t j = i; j-- > 0;) {
      if (y[j] > y[i]) break;
      left_min = std::min(left_min, y[j]);
    }
    double right_min = y[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (y[j] > y[i]) break;
      right_min = std::min(right_min, y[j]);
    }
    const double prominence = y[i] - std::max(left_min, right_min);
    if (prominence > threshold) {
      result.peaks.push_back({i, profile.grid.at(i), y[i], prominence});
    }
  }
  result.bimodal = result.peaks.size() >= 2;
  return result;
}

TransitReport transit_time_report(double transit_time, double excited_lifetime) {
  if (!(transit_time > 0.0) || !(excited_lifetime > 0.0)) {
    throw DomainError(kModule, "transit time and lifetime must be positive");
  }
  const double ratio = transit_time / excited_lifetime;
  return {transit_time, excited_lifetime, ratio, ratio > kTransitNegligibleRatio};
}

TransitReport transit_time_check(double beam_width, double thermal_speed, double excited_lifetime) {
  if (!(beam_width > 0.0) || !(thermal_speed > 0.0)) {
    throw DomainError(kModule, "beam width and thermal speed must be positive");
  }
  return transit_time_report(beam_width / thermal_speed, excited_lifetime);
}

}  // namespace lpai::spectrum
