#include "lpai/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "lpai/constants.hpp"
#include "lpai/errors.hpp"

namespace lpai::harness {

namespace {

constexpr const char* kModule = "harness";

// Dense sampling used for the readout dynamic range over a phase window.
constexpr std::size_t kRangeSamples = 101;

spectrum::SpectrumProfile kernel_for(const PipelineConfig& cfg) {
  if (!cfg.broaden) return {cfg.fgrid, {}, false};
  return spectrum::lorentzian_kernel(cfg.natural_linewidth, cfg.fgrid);
}

double sample_mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

}  // namespace

spectrum::LineParams PipelineConfig::line() const {
  return {probe_frequency, natural_linewidth, thermal.thermal_speed()};
}

spectrum::SpectrumProfile pipeline_spectrum(const PipelineConfig& cfg, double phi,
                                            const spectrum::SpectrumProfile& kernel) {
  auto profile = spectrum::doppler_profile(cfg.theta, phi, cfg.k_eff, cfg.thermal, cfg.line(), cfg.fgrid);
  if (!cfg.broaden) return profile;
  return spectrum::max_normalized(spectrum::convolve(profile, kernel));
}

spectrum::SpectrumProfile pipeline_spectrum(const PipelineConfig& cfg, double phi) {
  return pipeline_spectrum(cfg, phi, kernel_for(cfg));
}

PipelineResult run_pipeline(const PipelineConfig& cfg, double phi,
                            const spectrum::SpectrumProfile& kernel) {
  const auto profile = pipeline_spectrum(cfg, phi, kernel);
  const auto exact = wavepacket::exact_postselected(cfg.theta, phi, cfg.k_eff, cfg.thermal, cfg.vgrid);
  return {phi, spectrum::spectral_centroid(profile), spectrum::bimodality(profile).bimodal,
          exact.success_probability};
}

PipelineResult run_pipeline(const PipelineConfig& cfg, double phi) {
  return run_pipeline(cfg, phi, kernel_for(cfg));
}

void SweepSpec::validate() const {
  if (!std::isfinite(phi_min) || !std::isfinite(phi_max)) {
    throw DomainError(kModule, "sweep bounds must be finite");
  }
  if (n_phi == 1) {
    if (phi_min != phi_max) throw DomainError(kModule, "single-point sweep needs phi_min == phi_max");
    return;
  }
  if (n_phi < 2) throw DomainError(kModule, "sweep needs n_phi >= 1");
  if (!(phi_min < phi_max)) throw DomainError(kModule, "sweep needs phi_min < phi_max");
}

double SweepSpec::phi_at(std::size_t k) const {
  if (n_phi == 1) return phi_min;
  if (k + 1 == n_phi) return phi_max;
  return phi_min + static_cast<double>(k) * (phi_max - phi_min) / static_cast<double>(n_phi - 1);
}

std::vector<SweepRow> phi_sweep(const PipelineConfig& cfg, const SweepSpec& spec) {
  spec.validate();
  const auto kernel = kernel_for(cfg);
  std::vector<SweepRow> rows;
  rows.reserve(spec.n_phi);
  for (std::size_t k = 0; k < spec.n_phi; ++k) {
    const double phi = spec.phi_at(k);
    try {
      rows.push_back({run_pipeline(cfg, phi, kernel), {}});
    } catch (const Error& e) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      rows.push_back({{phi, nan, false, nan}, e.what()});
    }
  }
  return rows;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError(kModule, "linear fit needs two or more points");
  const double mx = sample_mean(x);
  const double my = sample_mean(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError(kModule, "linear fit with constant abscissa");
  const double slope = sxy / sxx;
  const double r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return {slope, my - slope * mx, r2, x.size()};
}

SweepShape analyze_sweep(const std::vector<SweepRow>& rows, double linear_max, double reversal_min) {
  std::vector<double> lx, ly, rx, ry;
  SweepShape shape{};
  shape.min_abs_centroid = std::numeric_limits<double>::infinity();
  for (const auto& row : rows) {
    if (!row.ok()) continue;
    const double phi = row.result.phi;
    const double c = row.result.centroid_hz;
    if (phi <= linear_max) { lx.push_back(phi); ly.push_back(c); }
    if (phi >= reversal_min) { rx.push_back(phi); ry.push_back(c); }
    if (std::abs(c) > shape.max_abs_centroid) {
      shape.max_abs_centroid = std::abs(c);
      shape.turnover_phi = phi;
    }
    shape.min_abs_centroid = std::min(shape.min_abs_centroid, std::abs(c));
  }
  shape.linear = linear_fit(lx, ly);
  shape.reversal = linear_fit(rx, ry);
  shape.opposite_slope = shape.linear.slope * shape.reversal.slope < 0.0;
  return shape;
}

Heatmap heatmap(const PipelineConfig& cfg_in, const SweepSpec& spec, bool broaden) {
  spec.validate();
  PipelineConfig cfg = cfg_in;
  cfg.broaden = broaden;
  const auto kernel = kernel_for(cfg);
  Heatmap map{cfg.fgrid, {}};
  map.columns.reserve(spec.n_phi);
  for (std::size_t k = 0; k < spec.n_phi; ++k) {
    const double phi = spec.phi_at(k);
    try {
      map.columns.push_back({phi, pipeline_spectrum(cfg, phi, kernel).intensity, {}});
    } catch (const Error& e) {
      map.columns.push_back({phi, {}, e.what()});
    }
  }
  return map;
}

double traditional_fringe(double phase) { return 0.5 * (1.0 + std::cos(phase)); }

double sql_limit(std::uint64_t n_atoms) {
  if (n_atoms == 0) throw DomainError(kModule, "standard quantum limit needs at least one atom");
  return 1.0 / std::sqrt(static_cast<double>(n_atoms));
}

// ---------------------------------------------------------------------------

void NoiseSpec::validate() const {
  if (!(snr > 0.0)) throw DomainError(kModule, "snr must be positive");
  if (n_trials < 1) throw DomainError(kModule, "n_trials must be at least 1");
}

void NoiseSetup::validate() const {
  if (!(window_min < window_max)) throw DomainError(kModule, "noise window needs min < max");
  if (!(calibration_min < calibration_max)) throw DomainError(kModule, "calibration region needs min < max");
  if (calibration_points < 2) throw DomainError(kModule, "calibration table needs two or more points");
  if (baseline_phi < calibration_min || baseline_phi > calibration_max) {
    throw CalibrationRangeError(kModule, "baseline phase outside the calibrated region");
  }
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

NoiseExperiment::NoiseExperiment(PipelineConfig cfg, NoiseSetup setup)
    : cfg_(std::move(cfg)), setup_(setup), kernel_(kernel_for(cfg_)) {
  setup_.validate();
  const SweepSpec cal{setup_.calibration_min, setup_.calibration_max, setup_.calibration_points};
  cal_phi_.resize(cal.n_phi);
  cal_centroid_.resize(cal.n_phi);
  for (std::size_t k = 0; k < cal.n_phi; ++k) {
    cal_phi_[k] = cal.phi_at(k);
    cal_centroid_[k] = centroid_readout(cal_phi_[k]);
  }

  const SweepSpec window{setup_.window_min, setup_.window_max, kRangeSamples};
  double f_lo = std::numeric_limits<double>::infinity(), f_hi = -f_lo;
  double c_lo = f_lo, c_hi = -f_lo;
  for (std::size_t k = 0; k < window.n_phi; ++k) {
    const double phi = window.phi_at(k);
    const double f = traditional_fringe(phi);
    const double c = centroid_readout(phi);
    f_lo = std::min(f_lo, f);
    f_hi = std::max(f_hi, f);
    c_lo = std::min(c_lo, c);
    c_hi = std::max(c_hi, c);
  }
  fringe_range_ = f_hi - f_lo;
  centroid_range_ = c_hi - c_lo;
}

double NoiseExperiment::centroid_readout(double phi) const {
  return spectrum::spectral_centroid(pipeline_spectrum(cfg_, phi, kernel_));
}

double NoiseExperiment::invert_centroid(double c) const {
  // The curve is monotone on the calibrated region; orient it ascending.
  const bool ascending = cal_centroid_.back() >= cal_centroid_.front();
  const std::size_t n = cal_phi_.size();
  // First segment whose upper node is at or past c; values outside the table
  // end up in the first or last segment and are extrapolated along it.
  std::size_t seg = 0;
  while (seg + 2 < n && (ascending ? c > cal_centroid_[seg + 1] : c < cal_centroid_[seg + 1])) ++seg;
  const double c0 = cal_centroid_[seg], c1 = cal_centroid_[seg + 1];
  if (c1 == c0) return cal_phi_[seg];
  return cal_phi_[seg] + (c - c0) * (cal_phi_[seg + 1] - cal_phi_[seg]) / (c1 - c0);
}

NoiseComparison NoiseExperiment::run(double true_phase, const NoiseSpec& noise) const {
  noise.validate();
  if (!(true_phase > -constants::pi && true_phase <= constants::pi)) {
    throw DomainError(kModule, "true phase must lie in (-pi, pi]");
  }
  const double phi_true = setup_.baseline_phi + true_phase;
  if (phi_true < setup_.calibration_min || phi_true > setup_.calibration_max) {
    throw CalibrationRangeError(kModule, "phase outside the calibrated linear region of the centroid curve");
  }

  struct Channel {
    double truth;
    double baseline;
    double rms;
  };
  const Channel fringe{traditional_fringe(phi_true), traditional_fringe(setup_.baseline_phi),
                       fringe_range_ / noise.snr};
  const Channel centroid{centroid_readout(phi_true), centroid_readout(setup_.baseline_phi),
                         centroid_range_ / noise.snr};

  auto simulate = [&](const Channel& ch, std::uint64_t index, auto&& invert) {
    std::mt19937_64 rng(stream_seed(noise.seed, index));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> readouts(noise.n_trials);
    double noise_sq = 0.0;
    for (double& r : readouts) {
      const double eps = ch.rms * gauss(rng);
      noise_sq += eps * eps;
      r = ch.truth + eps;
    }
    const double mean = sample_mean(readouts);
    double se = ch.rms / std::sqrt(static_cast<double>(readouts.size()));
    if (readouts.size() > 1) {
      double ss = 0.0;
      for (double r : readouts) ss += (r - mean) * (r - mean);
      se = std::sqrt(ss / static_cast<double>(readouts.size() - 1)) /
           std::sqrt(static_cast<double>(readouts.size()));
    }
    const double diff = std::abs(mean - ch.baseline);
    double significance = 0.0;
    if (se > 0.0) {
      significance = diff / se;
    } else if (diff > 0.0) {
      significance = std::numeric_limits<double>::infinity();
    }
    DetectionResult d{};
    d.estimated_phase = invert(mean) - setup_.baseline_phi;
    d.significance = significance;
    d.detected = significance >= kDetectionThreshold;
    d.mean_readout = mean;
    d.baseline_readout = ch.baseline;
    d.noise_rms = ch.rms;
    d.measured_noise_rms = std::sqrt(noise_sq / static_cast<double>(readouts.size()));
    return d;
  };

  NoiseComparison out{true_phase, {}, {}};
  out.fringe = simulate(fringe, 0, [](double r) { return std::acos(std::clamp(2.0 * r - 1.0, -1.0, 1.0)); });
  out.centroid = simulate(centroid, 1, [this](double r) { return invert_centroid(r); });
  return out;
}

std::vector<NoiseComparison> NoiseExperiment::run_batches(double true_phase, const NoiseSpec& noise,
                                                          std::size_t n_batches) const {
  std::vector<NoiseComparison> out;
  out.reserve(n_batches);
  for (std::size_t b = 0; b < n_batches; ++b) {
    NoiseSpec batch = noise;
    batch.seed = stream_seed(noise.seed, b);
    out.push_back(run(true_phase, batch));
  }
  return out;
}

NoiseComparison noise_compare(const PipelineConfig& cfg, const NoiseSetup& setup, double true_phase,
                              const NoiseSpec& noise) {
  return NoiseExperiment(cfg, setup).run(true_phase, noise);
}

}  // namespace lpai::harness
