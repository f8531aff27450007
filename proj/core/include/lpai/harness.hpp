#pragma once

// Experiment drivers: the full readout pipeline evaluated over phi, heat maps,
// the conventional fringe baseline, and the matched-SNR noise comparison.
//
// Pipeline for one phi: first-order Doppler profile on the frequency grid,
// optional Lorentzian broadening (mass-conserving edges), spectral centroid.
// The success probability comes from the exact two-branch density.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lpai/spectrum.hpp"
#include "lpai/wavepacket.hpp"

namespace lpai::harness {

struct PipelineConfig {
  wavepacket::ThermalParams thermal;
  double theta;              // rad
  double k_eff;              // rad/m
  double probe_frequency;    // Hz
  double natural_linewidth;  // Hz, FWHM
  wavepacket::VelocityGrid vgrid;
  spectrum::FrequencyGrid fgrid;
  bool broaden = true;

  spectrum::LineParams line() const;
};

struct PipelineResult {
  double phi;
  double centroid_hz;
  bool bimodal;
  double success_probability;
};

/// Max-normalized spectrum the centroid is taken from. kernel must be the
/// Lorentzian on cfg.fgrid when cfg.broaden is set; it is ignored otherwise.
spectrum::SpectrumProfile pipeline_spectrum(const PipelineConfig& cfg, double phi,
                                            const spectrum::SpectrumProfile& kernel);
spectrum::SpectrumProfile pipeline_spectrum(const PipelineConfig& cfg, double phi);

PipelineResult run_pipeline(const PipelineConfig& cfg, double phi,
                            const spectrum::SpectrumProfile& kernel);
PipelineResult run_pipeline(const PipelineConfig& cfg, double phi);

/// phi_k = phi_min + k (phi_max - phi_min) / (n_phi - 1). A single-point
/// sweep (n_phi = 1) requires phi_min == phi_max.
struct SweepSpec {
  double phi_min;
  double phi_max;
  std::size_t n_phi;

  void validate() const;
  double phi_at(std::size_t k) const;
};

struct SweepRow {
  PipelineResult result;
  std::string error;  // empty for a good row; module-qualified message otherwise

  bool ok() const { return error.empty(); }
};

/// Rows in ascending phi. Errors from individual points become error rows.
std::vector<SweepRow> phi_sweep(const PipelineConfig& cfg, const SweepSpec& spec);

struct LinearFit {
  double slope;
  double intercept;
  double r_squared;
  std::size_t n;
};

/// Ordinary least squares. Throws DomainError for fewer than two points or a
/// constant abscissa.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct SweepShape {
  LinearFit linear;    // phi in [phi_first, linear_max]
  LinearFit reversal;  // phi in [reversal_min, phi_last]
  bool opposite_slope;
  double turnover_phi;      // phi of the largest |centroid|
  double min_abs_centroid;  // Hz
  double max_abs_centroid;  // Hz
};

/// Uses good rows only. Throws DomainError when either window holds fewer
/// than two rows.
SweepShape analyze_sweep(const std::vector<SweepRow>& rows, double linear_max, double reversal_min);

struct HeatmapColumn {
  double phi;
  std::vector<double> intensity;  // max-normalized; empty on error
  std::string error;
};

struct Heatmap {
  spectrum::FrequencyGrid grid;
  std::vector<HeatmapColumn> columns;  // ascending phi
};

/// One pipeline_spectrum per phi. broaden overrides cfg.broaden.
Heatmap heatmap(const PipelineConfig& cfg, const SweepSpec& spec, bool broaden);

/// (1 + cos phase) / 2.
double traditional_fringe(double phase);

/// 1 / sqrt(N). Throws DomainError for N = 0.
double sql_limit(std::uint64_t n_atoms);

// ---------------------------------------------------------------------------
// Matched-SNR noise comparison

inline constexpr double kDetectionThreshold = 3.0;

struct NoiseSpec {
  double snr;  // readout dynamic range over the window / noise RMS
  std::size_t n_trials;
  std::uint64_t seed;

  void validate() const;
};

struct NoiseSetup {
  double baseline_phi;      // common operating point of both schemes
  double window_min;        // phase window defining each readout's dynamic range
  double window_max;
  double calibration_min;   // calibrated linear region of the centroid curve
  double calibration_max;
  std::size_t calibration_points;

  void validate() const;
};

struct DetectionResult {
  double estimated_phase;  // rad, inverted batch-mean readout minus baseline
  double significance;     // |mean readout - baseline readout| / standard error
  bool detected;           // significance >= kDetectionThreshold
  double mean_readout;
  double baseline_readout;
  double noise_rms;           // injected level
  double measured_noise_rms;  // RMS of the noise samples actually drawn
};

struct NoiseComparison {
  double true_phase;
  DetectionResult fringe;
  DetectionResult centroid;
};

/// Independent 64-bit stream seed for task `index` under `seed` (splitmix64).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

/// Holds the noiseless calibration table for the centroid scheme so repeated
/// batches share it.
class NoiseExperiment {
 public:
  NoiseExperiment(PipelineConfig cfg, NoiseSetup setup);

  const NoiseSetup& setup() const { return setup_; }
  const std::vector<double>& calibration_phi() const { return cal_phi_; }
  const std::vector<double>& calibration_centroid() const { return cal_centroid_; }

  /// Readout dynamic ranges over the window: |fringe| in probability, centroid in Hz.
  double fringe_range() const { return fringe_range_; }
  double centroid_range() const { return centroid_range_; }

  /// Noiseless centroid readout at phi (Hz), via the full pipeline.
  double centroid_readout(double phi) const;

  /// Phase whose calibrated centroid equals c, by linear interpolation, with
  /// straight-line extrapolation from the end segments.
  double invert_centroid(double c) const;

  /// One batch of n_trials per scheme. Fringe stream index 0, centroid 1.
  /// Throws CalibrationRangeError when baseline + true_phase leaves the
  /// calibrated region; DomainError when true_phase is outside (-pi, pi].
  NoiseComparison run(double true_phase, const NoiseSpec& noise) const;

  /// n_batches batches seeded with stream_seed(noise.seed, b).
  std::vector<NoiseComparison> run_batches(double true_phase, const NoiseSpec& noise,
                                           std::size_t n_batches) const;

 private:
  PipelineConfig cfg_;
  NoiseSetup setup_;
  spectrum::SpectrumProfile kernel_;
  std::vector<double> cal_phi_;
  std::vector<double> cal_centroid_;
  double fringe_range_ = 0.0;
  double centroid_range_ = 0.0;
};

/// One-shot convenience wrapper around NoiseExperiment::run.
NoiseComparison noise_compare(const PipelineConfig& cfg, const NoiseSetup& setup, double true_phase,
                              const NoiseSpec& noise);

}  // namespace lpai::harness
