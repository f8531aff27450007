#pragma once

// Experiment configuration: a YAML document (JSON is accepted as well, since
// it is a YAML subset). All quantities are SI; angles in radians; frequencies
// in Hz. See configs/README.md for the full key reference.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "lpai/constants.hpp"
#include "lpai/errors.hpp"
#include "lpai/harness.hpp"
#include "lpai/perturb.hpp"

namespace lpai::app {

/// Parse or validation failure. key is the dotted path ("sweep.points") and
/// line the 1-based document line, 0 when the value came from a default.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, int line, const std::string& what);

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  std::string key_;
  int line_;
};

struct VelocityGridConfig {
  double span_thermal_speeds = 6.0;  // half-span in units of sqrt(2 k_B T / m)
  std::uint64_t points = 4096;
  bool operator==(const VelocityGridConfig&) const = default;
};

struct FrequencyGridConfig {
  double half_span = 150e6;     // Hz
  std::uint64_t points = 6001;  // odd, so zero detuning is a node
  bool operator==(const FrequencyGridConfig&) const = default;
};

struct SweepConfig {
  double phi_min = 0.0005;
  double phi_max = 0.1;
  std::uint64_t points = 200;
  double linear_max = 0.02;     // upper end of the fitted linear region
  double reversal_min = 0.03;   // lower end of the reversal region
  bool operator==(const SweepConfig&) const = default;
};

struct HeatmapConfig {
  double phi_min = 0.0005;
  double phi_max = 0.1;
  std::uint64_t points = 40;
  bool operator==(const HeatmapConfig&) const = default;
};

struct NoiseConfig {
  double snr = 2.5;
  std::uint64_t trials = 100;
  std::uint64_t batches = 20;
  double true_phase = 0.005;
  double baseline_phi = 0.01;
  std::uint64_t calibration_points = 201;
  bool operator==(const NoiseConfig&) const = default;
};

struct StarkConfig {
  double rabi = 2.0 * constants::pi * 1e5;
  double detuning = 2.0 * constants::pi * 1e7;
  double duration = 1e-6;
  bool operator==(const StarkConfig&) const = default;
};

struct BerryConfig {
  double rabi = 2.0 * constants::pi * 1e5;
  double detuning = 2.0 * constants::pi * 1e6;
  double sweep_rate = 2.0 * constants::pi * 1e4;
  bool operator==(const BerryConfig&) const = default;
};

struct PerturbConfig {
  StarkConfig stark;
  BerryConfig berry;
  double baseline_phi = 0.01;
  bool operator==(const PerturbConfig&) const = default;
};

struct TransitConfig {
  double beam_width = 1e-3;              // m
  // s, excited probe level: 1 / (2 pi linewidth)
  double lifetime = 1.0 / (2.0 * constants::pi * constants::cesium_8p32_linewidth);
  double quoted_transit_time = 3e-3;     // s, value to cross-check against
  bool operator==(const TransitConfig&) const = default;
};

struct ExperimentConfig {
  double temperature = 1.0;  // K
  double theta = 0.0;        // rad, (0, pi/2)
  double phi = 0.0;          // rad, (-pi, pi]
  double k_eff = constants::cesium_d2_raman_k_eff;                  // rad/m
  double atom_mass = constants::cesium_mass;                         // kg
  double probe_frequency = constants::cesium_8p32_frequency;         // Hz
  double natural_linewidth = constants::cesium_8p32_linewidth;       // Hz, FWHM
  bool broaden = true;
  std::uint64_t seed = 1;
  std::string output = "out";

  VelocityGridConfig velocity_grid;
  FrequencyGridConfig frequency_grid;
  SweepConfig sweep;
  HeatmapConfig heatmap;
  NoiseConfig noise;
  PerturbConfig perturb;
  TransitConfig transit;

  bool operator==(const ExperimentConfig&) const = default;

  wavepacket::ThermalParams thermal() const;
  wavepacket::VelocityGrid velocity_grid_points() const;
  spectrum::FrequencyGrid frequency_grid_points() const;
  harness::PipelineConfig pipeline() const;
  harness::SweepSpec sweep_spec() const;
  harness::SweepSpec heatmap_spec() const;
  harness::NoiseSetup noise_setup() const;
  harness::NoiseSpec noise_spec() const;

  /// Effective configuration with every key present, in a fixed order.
  nlohmann::ordered_json to_json() const;
};

/// Strict parse: unknown keys, duplicate keys, type mismatches and range
/// violations raise ConfigError naming the key and line. temperature, theta
/// and phi are required; everything else has a default.
ExperimentConfig parse_config(const std::string& text);

/// Range checks shared by parse_config and flag overrides.
void validate(const ExperimentConfig& cfg);

}  // namespace lpai::app
