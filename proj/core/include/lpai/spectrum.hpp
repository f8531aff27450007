#pragma once

// Probe transmission spectra: Doppler mapping of the post-selected velocity
// distribution, Lorentzian natural broadening, and line-shape statistics.
// Frequencies are in Hz; detuning is measured from the probe eigenfrequency.

#include <cstddef>
#include <vector>

#include "lpai/wavepacket.hpp"

namespace lpai::spectrum {

/// Uniform detuning grid. The kernel origin (zero detuning) must be a node for
/// convolution; symmetric grids with an odd number of points satisfy that.
class FrequencyGrid {
 public:
  /// Throws DomainError unless min < max and n_points >= 3.
  FrequencyGrid(double detuning_min, double detuning_max, std::size_t n_points);

  static FrequencyGrid symmetric(double half_span, std::size_t n_points);

  double detuning_min() const { return min_; }
  double detuning_max() const { return max_; }
  std::size_t size() const { return n_; }
  double spacing() const { return (max_ - min_) / static_cast<double>(n_ - 1); }
  double span() const { return max_ - min_; }
  double at(std::size_t i) const;

  /// Index of the node at zero detuning, or -1 if there is none.
  long zero_index() const;

  bool operator==(const FrequencyGrid&) const = default;

 private:
  double min_;
  double max_;
  std::size_t n_;
};

struct LineParams {
  double probe_frequency;    // Hz, w0
  double natural_linewidth;  // Hz, FWHM
  double thermal_speed;      // m/s, sqrt(2 k_B T / m)

  void validate() const;
  /// w0 V / c: 1/e half-width of the Doppler Gaussian.
  double doppler_half_width() const;
  /// 2 sqrt(ln 2) w0 V / c.
  double doppler_fwhm() const;
};

struct SpectrumProfile {
  FrequencyGrid grid;
  std::vector<double> intensity;  // arbitrary units
  bool max_normalized = false;

  double area() const;
  double max() const;
};

/// Scales to unit maximum. Throws DomainError for an all-zero profile.
SpectrumProfile max_normalized(SpectrumProfile p);

/// Detuning w0 v / c of an atom moving at v; inverse mapping below.
double velocity_to_detuning(double v, double probe_frequency);
double detuning_to_velocity(double detuning, double probe_frequency);

/// Grid span required by doppler_profile, in Doppler half-widths per side.
inline constexpr double kMinimumSpanDopplerWidths = 4.0;

/// First-order Doppler intensity
///   I(d) = | exp(-(v/V)^2) [1 - hbar k Re(A_w) v / (k_B T)] |,  v = c d / w0,
/// max-normalized. Throws CoverageError when the grid does not span +-4
/// Doppler half-widths.
SpectrumProfile doppler_profile(double theta, double phi, double k_eff,
                                const wavepacket::ThermalParams& thermal, const LineParams& line,
                                const FrequencyGrid& fgrid);

/// Same profile obtained by evaluating the wavepacket first-order density on
/// the velocity image of the detuning grid and applying the Jacobian c / w0.
SpectrumProfile doppler_profile_via_wavepacket(double theta, double phi, double k_eff,
                                               const wavepacket::ThermalParams& thermal,
                                               const LineParams& line, const FrequencyGrid& fgrid);

/// Signed (pre-modulus) version of doppler_profile, in unnormalized units.
std::vector<double> doppler_profile_signed(double theta, double phi, double k_eff,
                                           const wavepacket::ThermalParams& thermal,
                                           const LineParams& line, const FrequencyGrid& fgrid);

/// Maximum grid spacing relative to the narrowest feature it must resolve.
inline constexpr double kResolutionFraction = 0.1;

/// Samples (G / 2 pi) / (d^2 + (G/2)^2) on the grid, centred at zero detuning.
/// Throws DomainError for gamma <= 0 and ResolutionError when the spacing
/// exceeds gamma / 10.
SpectrumProfile lorentzian_kernel(double gamma_fwhm, const FrequencyGrid& fgrid);

/// Mass of a unit Lorentzian inside [-half_span, half_span].
double lorentzian_window_mass(double gamma_fwhm, double half_span);

enum class EdgeMode {
  /// Each source bin's kernel is divided by the kernel mass that lands inside
  /// the grid, so the output area (trapezoid) equals the input area.
  ConserveMass,
  /// Plain zero-padded truncation; mass that falls off the grid is lost.
  Truncate,
};

/// out_i = h sum_j p_j k(d_i - d_j), with k indexed about the kernel's zero
/// detuning node. Throws DomainError on grid mismatch or when the grid has no
/// zero-detuning node.
SpectrumProfile convolve(const SpectrumProfile& profile, const SpectrumProfile& kernel,
                         EdgeMode mode = EdgeMode::ConserveMass);

/// Intensity-weighted mean detuning. Throws DomainError for zero intensity.
double spectral_centroid(const SpectrumProfile& profile);

struct FwhmResult {
  double width;       // Hz, between outermost half-maximum crossings
  bool multimodal;    // half maximum crossed more than twice
  int crossings;
};

/// Full width at half of the global maximum with linear interpolation between
/// samples. Throws DomainError if the profile never falls below half maximum
/// on one side.
FwhmResult fwhm(const SpectrumProfile& profile);

struct Peak {
  std::size_t index;
  double detuning;
  double height;
  double prominence;
};

struct BimodalityResult {
  bool bimodal;
  std::vector<Peak> peaks;  // prominent peaks, ascending detuning
};

inline constexpr double kProminenceFraction = 0.02;

/// Local maxima whose topographic prominence exceeds 2% of the global maximum.
BimodalityResult bimodality(const SpectrumProfile& profile,
                            double prominence_fraction = kProminenceFraction);

struct TransitReport {
  double transit_time;    // s
  double lifetime;        // s
  double ratio;           // transit_time / lifetime
  bool negligible;        // ratio > 10
};

inline constexpr double kTransitNegligibleRatio = 10.0;

/// Transit time of an atom at thermal_speed through a beam of the given width
/// compared with the excited-state lifetime.
TransitReport transit_time_check(double beam_width, double thermal_speed, double excited_lifetime);

/// Verdict for an externally quoted transit time.
TransitReport transit_time_report(double transit_time, double excited_lifetime);

}  // namespace lpai::spectrum
