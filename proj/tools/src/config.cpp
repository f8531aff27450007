#include "lpai_app/config.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string_view>

#include <yaml-cpp/yaml.h>

namespace lpai::app {

namespace {

std::string describe(const std::string& key, int line, const std::string& what) {
  std::string where = key.empty() ? std::string("document") : key;
  if (line > 0) where += " (line " + std::to_string(line) + ")";
  return where + ": " + what;
}

// Single list of leaf keys, used for parsing, echoing and the strict schema.
template <class Cfg, class Visitor>
void visit_fields(Cfg& c, Visitor&& v) {
  v("temperature", c.temperature);
  v("theta", c.theta);
  v("phi", c.phi);
  v("k_eff", c.k_eff);
  v("atom_mass", c.atom_mass);
  v("probe_frequency", c.probe_frequency);
  v("natural_linewidth", c.natural_linewidth);
  v("broaden", c.broaden);
  v("seed", c.seed);
  v("output", c.output);
  v("velocity_grid.span_thermal_speeds", c.velocity_grid.span_thermal_speeds);
  v("velocity_grid.points", c.velocity_grid.points);
  v("frequency_grid.half_span", c.frequency_grid.half_span);
  v("frequency_grid.points", c.frequency_grid.points);
  v("sweep.phi_min", c.sweep.phi_min);
  v("sweep.phi_max", c.sweep.phi_max);
  v("sweep.points", c.sweep.points);
  v("sweep.linear_max", c.sweep.linear_max);
  v("sweep.reversal_min", c.sweep.reversal_min);
  v("heatmap.phi_min", c.heatmap.phi_min);
  v("heatmap.phi_max", c.heatmap.phi_max);
  v("heatmap.points", c.heatmap.points);
  v("noise.snr", c.noise.snr);
  v("noise.trials", c.noise.trials);
  v("noise.batches", c.noise.batches);
  v("noise.true_phase", c.noise.true_phase);
  v("noise.baseline_phi", c.noise.baseline_phi);
  v("noise.calibration_points", c.noise.calibration_points);
  v("perturb.stark.rabi", c.perturb.stark.rabi);
  v("perturb.stark.detuning", c.perturb.stark.detuning);
  v("perturb.stark.duration", c.perturb.stark.duration);
  v("perturb.berry.rabi", c.perturb.berry.rabi);
  v("perturb.berry.detuning", c.perturb.berry.detuning);
  v("perturb.berry.sweep_rate", c.perturb.berry.sweep_rate);
  v("perturb.baseline_phi", c.perturb.baseline_phi);
  v("transit.beam_width", c.transit.beam_width);
  v("transit.lifetime", c.transit.lifetime);
  v("transit.quoted_transit_time", c.transit.quoted_transit_time);
}

constexpr std::string_view kRequired[] = {"temperature", "theta", "phi"};

struct Schema {
  std::set<std::string> leaves;
  std::set<std::string> sections;

  Schema() {
    ExperimentConfig dummy;
    visit_fields(dummy, [this](const std::string& path, auto&) {
      leaves.insert(path);
      for (std::size_t dot = path.find('.'); dot != std::string::npos; dot = path.find('.', dot + 1)) {
        sections.insert(path.substr(0, dot));
      }
    });
  }
};

const Schema& schema() {
  static const Schema s;
  return s;
}

struct Located {
  YAML::Node node;
  int line;
};

int line_of(const YAML::Node& n) { return n.Mark().line + 1; }

void flatten(const YAML::Node& map, const std::string& prefix, std::map<std::string, Located>& out) {
  std::set<std::string> seen;
  for (const auto& kv : map) {
    const int line = line_of(kv.first);
    if (!kv.first.IsScalar()) throw ConfigError(prefix, line, "keys must be plain scalars");
    const std::string key = kv.first.Scalar();
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!seen.insert(key).second) throw ConfigError(path, line, "duplicate key");
    if (schema().leaves.count(path)) {
      out.emplace(path, Located{kv.second, line});
    } else if (schema().sections.count(path)) {
      if (kv.second.IsNull()) continue;
      if (!kv.second.IsMap()) throw ConfigError(path, line, "expected a mapping");
      flatten(kv.second, path, out);
    } else {
      throw ConfigError(path, line, "unknown key");
    }
  }
}

void convert(const std::string& path, const Located& at, double& dst) {
  if (!at.node.IsScalar()) throw ConfigError(path, at.line, "expected a number");
  try {
    dst = at.node.as<double>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path, at.line, "expected a number, got '" + at.node.Scalar() + "'");
  }
}

void convert(const std::string& path, const Located& at, std::uint64_t& dst) {
  const std::string s = at.node.IsScalar() ? at.node.Scalar() : std::string();
  const bool digits = !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
  if (!digits) throw ConfigError(path, at.line, "expected a non-negative integer, got '" + s + "'");
  try {
    dst = at.node.as<std::uint64_t>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path, at.line, "integer out of range");
  }
}

void convert(const std::string& path, const Located& at, bool& dst) {
  if (!at.node.IsScalar()) throw ConfigError(path, at.line, "expected a boolean");
  try {
    dst = at.node.as<bool>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path, at.line, "expected a boolean, got '" + at.node.Scalar() + "'");
  }
}

void convert(const std::string& path, const Located& at, std::string& dst) {
  if (!at.node.IsScalar()) throw ConfigError(path, at.line, "expected a string");
  dst = at.node.Scalar();
}

using LineLookup = std::function<int(const std::string&)>;

void validate_impl(const ExperimentConfig& c, const LineLookup& line) {
  const double pi = constants::pi;
  auto fail = [&](const std::string& key, const std::string& what) { throw ConfigError(key, line(key), what); };
  auto finite = [&](const std::string& key, double x) {
    if (!std::isfinite(x)) fail(key, "must be finite");
  };
  auto positive = [&](const std::string& key, double x) {
    if (!(x > 0.0) || !std::isfinite(x)) fail(key, "must be a finite positive number");
  };
  auto phase = [&](const std::string& key, double x) {
    if (!(x > -pi && x <= pi)) fail(key, "must lie in (-pi, pi]");
  };

  positive("temperature", c.temperature);
  if (!(c.theta > 0.0 && c.theta < 0.5 * pi)) fail("theta", "must lie in (0, pi/2)");
  phase("phi", c.phi);
  positive("k_eff", c.k_eff);
  positive("atom_mass", c.atom_mass);
  positive("probe_frequency", c.probe_frequency);
  positive("natural_linewidth", c.natural_linewidth);
  if (c.output.empty()) fail("output", "must not be empty");

  positive("velocity_grid.span_thermal_speeds", c.velocity_grid.span_thermal_speeds);
  if (c.velocity_grid.points < 3) fail("velocity_grid.points", "must be at least 3");
  positive("frequency_grid.half_span", c.frequency_grid.half_span);
  if (c.frequency_grid.points < 3 || c.frequency_grid.points % 2 == 0) {
    fail("frequency_grid.points", "must be odd and at least 3 (zero detuning has to be a grid node)");
  }

  phase("sweep.phi_min", c.sweep.phi_min);
  phase("sweep.phi_max", c.sweep.phi_max);
  if (c.sweep.points == 0) fail("sweep.points", "must be at least 1");
  if (c.sweep.points == 1 ? c.sweep.phi_min != c.sweep.phi_max : !(c.sweep.phi_min < c.sweep.phi_max)) {
    fail("sweep.phi_max", "must exceed sweep.phi_min (or equal it for a single point)");
  }
  finite("sweep.linear_max", c.sweep.linear_max);
  finite("sweep.reversal_min", c.sweep.reversal_min);
  if (c.sweep.linear_max <= c.sweep.phi_min || c.sweep.linear_max > c.sweep.phi_max) {
    fail("sweep.linear_max", "must lie in (sweep.phi_min, sweep.phi_max]");
  }
  if (c.sweep.reversal_min < c.sweep.phi_min || c.sweep.reversal_min >= c.sweep.phi_max) {
    fail("sweep.reversal_min", "must lie in [sweep.phi_min, sweep.phi_max)");
  }

  phase("heatmap.phi_min", c.heatmap.phi_min);
  phase("heatmap.phi_max", c.heatmap.phi_max);
  if (c.heatmap.points == 0) fail("heatmap.points", "must be at least 1");
  if (c.heatmap.points == 1 ? c.heatmap.phi_min != c.heatmap.phi_max
                            : !(c.heatmap.phi_min < c.heatmap.phi_max)) {
    fail("heatmap.phi_max", "must exceed heatmap.phi_min (or equal it for a single point)");
  }

  positive("noise.snr", c.noise.snr);
  if (c.noise.trials < 1) fail("noise.trials", "must be at least 1");
  if (c.noise.batches < 1) fail("noise.batches", "must be at least 1");
  phase("noise.true_phase", c.noise.true_phase);
  if (c.noise.baseline_phi < c.sweep.phi_min || c.noise.baseline_phi > c.sweep.linear_max) {
    fail("noise.baseline_phi", "must lie in the calibrated region [sweep.phi_min, sweep.linear_max]");
  }
  if (c.noise.calibration_points < 2) fail("noise.calibration_points", "must be at least 2");

  finite("perturb.stark.rabi", c.perturb.stark.rabi);
  finite("perturb.stark.detuning", c.perturb.stark.detuning);
  if (c.perturb.stark.detuning == 0.0) fail("perturb.stark.detuning", "must be nonzero");
  if (!(c.perturb.stark.duration >= 0.0) || !std::isfinite(c.perturb.stark.duration)) {
    fail("perturb.stark.duration", "must be finite and non-negative");
  }
  finite("perturb.berry.rabi", c.perturb.berry.rabi);
  finite("perturb.berry.detuning", c.perturb.berry.detuning);
  finite("perturb.berry.sweep_rate", c.perturb.berry.sweep_rate);
  if (c.perturb.berry.rabi == 0.0 && c.perturb.berry.detuning == 0.0) {
    fail("perturb.berry.detuning", "rabi and detuning must not both be zero");
  }
  phase("perturb.baseline_phi", c.perturb.baseline_phi);

  positive("transit.beam_width", c.transit.beam_width);
  positive("transit.lifetime", c.transit.lifetime);
  positive("transit.quoted_transit_time", c.transit.quoted_transit_time);
}

}  // namespace

ConfigError::ConfigError(const std::string& key, int line, const std::string& what)
    : Error("config", describe(key, line, what)), key_(key), line_(line) {}

wavepacket::ThermalParams ExperimentConfig::thermal() const { return {atom_mass, temperature}; }

wavepacket::VelocityGrid ExperimentConfig::velocity_grid_points() const {
  return wavepacket::VelocityGrid::symmetric(velocity_grid.span_thermal_speeds * thermal().thermal_speed(),
                                             velocity_grid.points);
}

spectrum::FrequencyGrid ExperimentConfig::frequency_grid_points() const {
  return spectrum::FrequencyGrid::symmetric(frequency_grid.half_span, frequency_grid.points);
}

harness::PipelineConfig ExperimentConfig::pipeline() const {
  return {thermal(), theta, k_eff, probe_frequency, natural_linewidth,
          velocity_grid_points(), frequency_grid_points(), broaden};
}

harness::SweepSpec ExperimentConfig::sweep_spec() const {
  return {sweep.phi_min, sweep.phi_max, sweep.points};
}

harness::SweepSpec ExperimentConfig::heatmap_spec() const {
  return {heatmap.phi_min, heatmap.phi_max, heatmap.points};
}

harness::NoiseSetup ExperimentConfig::noise_setup() const {
  return {noise.baseline_phi, sweep.phi_min, sweep.phi_max, sweep.phi_min, sweep.linear_max,
          noise.calibration_points};
}

harness::NoiseSpec ExperimentConfig::noise_spec() const { return {noise.snr, noise.trials, seed}; }

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  visit_fields(*this, [&j](const std::string& path, const auto& value) {
    nlohmann::ordered_json* node = &j;
    std::size_t start = 0;
    for (std::size_t dot = path.find('.'); dot != std::string::npos; dot = path.find('.', start)) {
      node = &(*node)[path.substr(start, dot - start)];
      start = dot + 1;
    }
    (*node)[path.substr(start)] = value;
  });
  return j;
}

void validate(const ExperimentConfig& cfg) {
  validate_impl(cfg, [](const std::string&) { return 0; });
}

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("", e.mark.line + 1, e.msg);
  }
  if (!root.IsNull() && !root.IsMap()) throw ConfigError("", 1, "top level must be a mapping");

  std::map<std::string, Located> values;
  if (root.IsMap()) flatten(root, "", values);

  for (std::string_view key : kRequired) {
    if (!values.count(std::string(key))) throw ConfigError(std::string(key), 0, "required key is missing");
  }

  ExperimentConfig cfg;
  visit_fields(cfg, [&values](const std::string& path, auto& dst) {
    const auto it = values.find(path);
    if (it != values.end()) convert(path, it->second, dst);
  });
  validate_impl(cfg, [&values](const std::string& key) {
    const auto it = values.find(key);
    return it == values.end() ? 0 : it->second.line;
  });
  return cfg;
}

}  // namespace lpai::app
