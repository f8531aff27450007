#include "lpai_app/commands.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "lpai/csv.hpp"
#include "lpai/qdyn.hpp"

#ifndef LPAI_GIT_REVISION
#define LPAI_GIT_REVISION "unknown"
#endif

namespace lpai::app {

namespace {

using json = nlohmann::ordered_json;

json weak_json(const qdyn::WeakValue& w) { return json{{"re", w.re}, {"im", w.im}}; }

json peaks_json(const spectrum::BimodalityResult& b) {
  json peaks = json::array();
  for (const auto& p : b.peaks) {
    peaks.push_back(json{{"detuning_hz", p.detuning}, {"height", p.height}, {"prominence", p.prominence}});
  }
  return json{{"bimodal", b.bimodal}, {"peaks", peaks}};
}

json fwhm_json(const spectrum::SpectrumProfile& p) {
  try {
    const auto f = spectrum::fwhm(p);
    return json{{"width_hz", f.width}, {"multimodal", f.multimodal}, {"crossings", f.crossings}};
  } catch (const Error& e) {
    return json{{"error", e.what()}};
  }
}

json transit_json(const spectrum::TransitReport& r) {
  return json{{"transit_time_s", r.transit_time}, {"lifetime_s", r.lifetime}, {"ratio", r.ratio},
              {"negligible", r.negligible}};
}

json closed_form_json(const qdyn::ClosedFormReport& r) {
  return json{{"theta", r.theta},
              {"phi", r.phi},
              {"closed_form", weak_json(r.closed_form)},
              {"definition_sigma_z", weak_json(r.definition_sigma_z)},
              {"definition_sigma_z_half", weak_json(r.definition_half)},
              {"mismatch_sigma_z", r.mismatch_sigma_z},
              {"mismatch_sigma_z_half", r.mismatch_half},
              {"consistent", r.consistent}};
}

// ---------------------------------------------------------------------------

CommandOutput weak_value_cmd(const ExperimentConfig& cfg) {
  const auto pre = qdyn::TwoLevelState::pre_selection(cfg.phi);
  const auto post = qdyn::TwoLevelState::post_selection(cfg.theta);
  const auto overlap = qdyn::postselect_overlap(pre, post);
  const auto sz = qdyn::weak_value(pre, post, qdyn::Operator2::pauli_z());
  const auto half = qdyn::pointer_weak_value(cfg.theta, cfg.phi);
  const auto report = qdyn::closed_form_weak_value(cfg.theta, cfg.phi);

  CommandOutput out;
  out.results["overlap"] = weak_json({overlap.real(), overlap.imag()});
  out.results["success_probability"] = std::norm(overlap);
  out.results["sigma_z"] = weak_json(sz);
  out.results["sigma_z_half"] = weak_json(half);
  out.results["closed_form_report"] = closed_form_json(report);

  csv::Table t({"quantity", "re", "im"});
  t.add_row({std::string("sigma_z"), sz.re, sz.im});
  t.add_row({std::string("sigma_z_half"), half.re, half.im});
  t.add_row({std::string("closed_form"), report.closed_form.re, report.closed_form.im});
  out.files.push_back({"weak_value.csv", t.str()});

  out.text = fmt::format(
      "theta = {:.12g}, phi = {:.12g}\n"
      "  <sigma_z>_w     = {:.12g} {:+.12g} i\n"
      "  <sigma_z/2>_w   = {:.12g} {:+.12g} i\n"
      "  closed form     = {:.12g} {:+.12g} i\n"
      "  mismatch vs sigma_z = {:.6g}, vs sigma_z/2 = {:.6g} ({})\n",
      cfg.theta, cfg.phi, sz.re, sz.im, half.re, half.im, report.closed_form.re, report.closed_form.im,
      report.mismatch_sigma_z, report.mismatch_half, report.consistent ? "consistent" : "inconsistent");
  return out;
}

CommandOutput packet_cmd(const ExperimentConfig& cfg) {
  const auto thermal = cfg.thermal();
  const auto grid = cfg.velocity_grid_points();
  const auto first = wavepacket::firstorder_postselected(cfg.theta, cfg.phi, cfg.k_eff, thermal, grid);
  const auto exact = wavepacket::exact_postselected(cfg.theta, cfg.phi, cfg.k_eff, thermal, grid);

  csv::Table t({"v", "symmetric", "asymmetric", "total", "exact"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = grid.at(i);
    const double f = wavepacket::maxwell_boltzmann_pdf(thermal, v);
    t.add_row({v, f, -first.slope * v * f, first.signed_profile.values()[i], exact.density.values()[i]});
  }

  CommandOutput out;
  const double c_total = wavepacket::centroid(first.signed_profile);
  const double c_exact = wavepacket::centroid(exact.density);
  out.results["pointer_weak_value"] = weak_json(first.weak);
  out.results["branch_offset_mps"] = wavepacket::branch_offset(cfg.k_eff, cfg.atom_mass);
  out.results["thermal_speed_mps"] = thermal.thermal_speed();
  out.results["centroid_total_mps"] = c_total;
  out.results["centroid_closed_form_mps"] =
      wavepacket::firstorder_centroid_closed_form(cfg.theta, cfg.phi, cfg.k_eff, cfg.atom_mass);
  out.results["centroid_modulus_mps"] = wavepacket::centroid(first.density);
  out.results["centroid_exact_mps"] = c_exact;
  out.results["amplification_factor"] = wavepacket::amplification_factor(exact.density, cfg.k_eff, cfg.atom_mass);
  out.results["success_probability"] = exact.success_probability;
  out.files.push_back({"packet.csv", t.str()});
  out.text = fmt::format("centroid: first-order {:.6g} m/s, exact {:.6g} m/s; amplification {:.6g}\n", c_total,
                         c_exact, out.results["amplification_factor"].get<double>());
  return out;
}

CommandOutput spectrum_cmd(const ExperimentConfig& cfg) {
  auto pc = cfg.pipeline();
  pc.broaden = false;
  const auto doppler = harness::pipeline_spectrum(pc, cfg.phi);
  pc.broaden = true;
  const auto broadened = harness::pipeline_spectrum(pc, cfg.phi);

  csv::Table t({"detuning_hz", "doppler", "broadened"});
  for (std::size_t i = 0; i < doppler.grid.size(); ++i) {
    t.add_row({doppler.grid.at(i), doppler.intensity[i], broadened.intensity[i]});
  }

  CommandOutput out;
  out.results["doppler_half_width_hz"] = pc.line().doppler_half_width();
  out.results["doppler_fwhm_hz"] = pc.line().doppler_fwhm();
  out.results["linewidth_over_doppler_fwhm"] = cfg.natural_linewidth / pc.line().doppler_fwhm();
  out.results["doppler"] = json{{"centroid_hz", spectrum::spectral_centroid(doppler)},
                                {"fwhm", fwhm_json(doppler)},
                                {"bimodality", peaks_json(spectrum::bimodality(doppler))}};
  out.results["broadened"] = json{{"centroid_hz", spectrum::spectral_centroid(broadened)},
                                  {"fwhm", fwhm_json(broadened)},
                                  {"bimodality", peaks_json(spectrum::bimodality(broadened))}};
  out.results["transit"] = transit_json(
      spectrum::transit_time_check(cfg.transit.beam_width, cfg.thermal().thermal_speed(), cfg.transit.lifetime));
  out.files.push_back({"spectrum.csv", t.str()});
  out.text = fmt::format("centroid: {:.6g} Hz (Doppler), {:.6g} Hz (broadened); bimodal {} / {}\n",
                         out.results["doppler"]["centroid_hz"].get<double>(),
                         out.results["broadened"]["centroid_hz"].get<double>(),
                         out.results["doppler"]["bimodality"]["bimodal"].get<bool>(),
                         out.results["broadened"]["bimodality"]["bimodal"].get<bool>());
  return out;
}

std::string heatmap_csv(const harness::Heatmap& map) {
  csv::Table t({"phi_rad", "detuning_hz", "intensity"});
  for (const auto& col : map.columns) {
    for (std::size_t i = 0; i < col.intensity.size(); ++i) t.add_row({col.phi, map.grid.at(i), col.intensity[i]});
  }
  return t.str();
}

CommandOutput heatmap_cmd(const ExperimentConfig& cfg) {
  const auto spec = cfg.heatmap_spec();
  const auto broadened = harness::heatmap(cfg.pipeline(), spec, true);
  const auto doppler = harness::heatmap(cfg.pipeline(), spec, false);

  json errors = json::array();
  for (const auto* map : {&broadened, &doppler}) {
    for (const auto& col : map->columns) {
      if (!col.error.empty()) errors.push_back(json{{"phi", col.phi}, {"error", col.error}});
    }
  }
  CommandOutput out;
  out.results["columns"] = spec.n_phi;
  out.results["rows_per_column"] = broadened.grid.size();
  out.results["errors"] = errors;
  out.files.push_back({"heatmap.csv", heatmap_csv(broadened)});
  out.files.push_back({"heatmap_doppler.csv", heatmap_csv(doppler)});
  out.text = fmt::format("heat map: {} columns x {} detunings, {} error columns\n", spec.n_phi,
                         broadened.grid.size(), errors.size());
  return out;
}

CommandOutput sweep_cmd(const ExperimentConfig& cfg) {
  const auto rows = harness::phi_sweep(cfg.pipeline(), cfg.sweep_spec());
  csv::Table t({"phi", "centroid_hz", "bimodal", "success_probability", "error"});
  std::size_t n_errors = 0;
  for (const auto& r : rows) {
    n_errors += r.ok() ? 0 : 1;
    t.add_row({r.result.phi, r.result.centroid_hz, r.result.bimodal, r.result.success_probability, r.error});
  }

  CommandOutput out;
  out.results["points"] = rows.size();
  out.results["error_rows"] = n_errors;
  try {
    const auto s = harness::analyze_sweep(rows, cfg.sweep.linear_max, cfg.sweep.reversal_min);
    out.results["linear_region"] = json{{"phi_max", cfg.sweep.linear_max}, {"slope_hz_per_rad", s.linear.slope},
                                        {"r_squared", s.linear.r_squared}, {"points", s.linear.n}};
    out.results["reversal_region"] = json{{"phi_min", cfg.sweep.reversal_min},
                                          {"slope_hz_per_rad", s.reversal.slope},
                                          {"r_squared", s.reversal.r_squared}, {"points", s.reversal.n}};
    out.results["opposite_slope"] = s.opposite_slope;
    out.results["turnover_phi"] = s.turnover_phi;
    out.results["min_abs_centroid_hz"] = s.min_abs_centroid;
    out.results["max_abs_centroid_hz"] = s.max_abs_centroid;
    out.text = fmt::format("sweep: {} points, linear R^2 {:.4f}, slopes {:.4g} / {:.4g} Hz/rad, turnover at {:.4g}\n",
                           rows.size(), s.linear.r_squared, s.linear.slope, s.reversal.slope, s.turnover_phi);
  } catch (const Error& e) {
    out.results["shape_error"] = e.what();
    out.text = fmt::format("sweep: {} points; shape analysis unavailable: {}\n", rows.size(), e.what());
  }
  out.files.push_back({"sweep_phi.csv", t.str()});
  return out;
}

json detection_json(const harness::DetectionResult& d) {
  return json{{"estimated_phase", d.estimated_phase}, {"significance", d.significance},
              {"detected", d.detected},           {"mean_readout", d.mean_readout},
              {"baseline_readout", d.baseline_readout}, {"noise_rms", d.noise_rms},
              {"measured_noise_rms", d.measured_noise_rms}};
}

CommandOutput noise_cmd(const ExperimentConfig& cfg) {
  const harness::NoiseExperiment exp(cfg.pipeline(), cfg.noise_setup());
  const auto batches = exp.run_batches(cfg.noise.true_phase, cfg.noise_spec(), cfg.noise.batches);

  csv::Table t({"batch", "seed", "scheme", "estimated_phase", "significance", "detected", "mean_readout",
                "baseline_readout", "noise_rms", "measured_noise_rms"});
  std::size_t fringe_hits = 0, centroid_hits = 0;
  for (std::size_t b = 0; b < batches.size(); ++b) {
    const auto seed = std::to_string(harness::stream_seed(cfg.seed, b));
    for (const auto& [name, d] : {std::pair{"fringe", batches[b].fringe}, std::pair{"centroid", batches[b].centroid}}) {
      t.add_row({static_cast<std::int64_t>(b), seed, std::string(name), d.estimated_phase, d.significance,
                 d.detected, d.mean_readout, d.baseline_readout, d.noise_rms, d.measured_noise_rms});
    }
    fringe_hits += batches[b].fringe.detected ? 1 : 0;
    centroid_hits += batches[b].centroid.detected ? 1 : 0;
  }

  const double n = static_cast<double>(batches.size());
  CommandOutput out;
  out.results["true_phase"] = cfg.noise.true_phase;
  out.results["baseline_phi"] = cfg.noise.baseline_phi;
  out.results["snr"] = cfg.noise.snr;
  out.results["detection_threshold_sigma"] = harness::kDetectionThreshold;
  out.results["fringe_dynamic_range"] = exp.fringe_range();
  out.results["centroid_dynamic_range_hz"] = exp.centroid_range();
  out.results["fringe_detection_rate"] = static_cast<double>(fringe_hits) / n;
  out.results["centroid_detection_rate"] = static_cast<double>(centroid_hits) / n;
  out.results["first_batch"] = json{{"fringe", detection_json(batches.front().fringe)},
                                    {"centroid", detection_json(batches.front().centroid)}};
  out.files.push_back({"noise_compare.csv", t.str()});
  out.text = fmt::format("true phase {:.4g} rad at snr {:.4g}: detected in {}/{} (fringe), {}/{} (centroid) batches\n",
                         cfg.noise.true_phase, cfg.noise.snr, fringe_hits, batches.size(), centroid_hits,
                         batches.size());
  return out;
}

CommandOutput perturb_cmd(const ExperimentConfig& cfg) {
  const auto& p = cfg.perturb;
  const auto stark = perturb::ac_stark_phase({p.stark.rabi, p.stark.detuning, p.stark.duration});
  const auto berry = perturb::berry_phase({p.berry.rabi, p.berry.detuning, p.berry.sweep_rate});
  const auto thermal = cfg.thermal();
  const auto grid = cfg.velocity_grid_points();

  csv::Table t({"source", "phase", "regime_ok", "im_weak_sigma_z", "im_weak_sigma_z_half", "linear_sigma_z",
                "linear_sigma_z_half", "pipeline", "linear_response"});
  CommandOutput out;
  json warnings = json::array();
  for (const auto& [name, r] : {std::pair{"ac_stark", stark}, std::pair{"berry", berry.result}}) {
    const auto s = perturb::amplified_pointer_shift(r.phase, cfg.theta, p.baseline_phi, cfg.k_eff, thermal, grid);
    t.add_row({std::string(name), s.phase, r.regime_ok, s.im_weak_sigma_z, s.im_weak_half, s.linear_sigma_z,
               s.linear_half, s.pipeline, s.linear_response});
    out.results[name] = json{{"phase", r.phase},
                             {"regime_ok", r.regime_ok},
                             {"pointer_shift_kgmps",
                              json{{"linear_sigma_z", s.linear_sigma_z},
                                   {"linear_sigma_z_half", s.linear_half},
                                   {"pipeline", s.pipeline},
                                   {"linear_response", s.linear_response}}}};
    if (!r.regime_ok) warnings.push_back(std::string(name) + ": " + r.warning);
  }
  out.results["berry"]["cone_angle"] = berry.cone_angle;
  out.results["berry"]["solid_angle"] = berry.solid_angle;
  out.results["warnings"] = warnings;
  out.files.push_back({"perturb.csv", t.str()});
  out.text = fmt::format("AC-Stark phase {:.6g} rad, Berry phase {:.6g} rad\n", stark.phase, berry.result.phase);
  for (const auto& w : warnings) out.text += "warning: " + w.get<std::string>() + "\n";
  return out;
}

json discrepancy_report(const ExperimentConfig& cfg) {
  const auto wv = qdyn::closed_form_weak_value(cfg.theta, cfg.phi);
  const double speed = cfg.thermal().thermal_speed();
  const auto computed = spectrum::transit_time_check(cfg.transit.beam_width, speed, cfg.transit.lifetime);
  const auto quoted = spectrum::transit_time_report(cfg.transit.quoted_transit_time, cfg.transit.lifetime);

  json entries = json::array();
  json w{{"id", "weak_value_closed_form"}, {"status", wv.consistent ? "consistent" : "mismatch"}};
  w.update(closed_form_json(wv));
  entries.push_back(w);

  const double factor = quoted.transit_time / computed.transit_time;
  entries.push_back(json{{"id", "transit_time"},
                         {"status", std::abs(std::log10(factor)) > 0.5 ? "mismatch" : "consistent"},
                         {"beam_width_m", cfg.transit.beam_width},
                         {"thermal_speed_mps", speed},
                         {"computed", transit_json(computed)},
                         {"quoted", transit_json(quoted)},
                         {"quoted_over_computed", factor}});
  return entries;
}

CommandOutput discrepancies_cmd(const ExperimentConfig& cfg) {
  CommandOutput out;
  out.results["entries"] = discrepancy_report(cfg);
  out.files.push_back({"discrepancies.json", out.results["entries"].dump(2) + "\n"});
  std::string text;
  for (const auto& e : out.results["entries"]) {
    text += fmt::format("{}: {}\n", e["id"].get<std::string>(), e["status"].get<std::string>());
  }
  out.text = text;
  return out;
}

}  // namespace

const char* git_revision() { return LPAI_GIT_REVISION; }

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"weak-value", "packet",        "spectrum", "heatmap",
                                                 "sweep-phi",  "noise-compare", "perturb",  "discrepancies"};
  return names;
}

CommandOutput execute(const std::string& subcommand, const ExperimentConfig& cfg) {
  validate(cfg);
  if (subcommand == "weak-value") return weak_value_cmd(cfg);
  if (subcommand == "packet") return packet_cmd(cfg);
  if (subcommand == "spectrum") return spectrum_cmd(cfg);
  if (subcommand == "heatmap") return heatmap_cmd(cfg);
  if (subcommand == "sweep-phi") return sweep_cmd(cfg);
  if (subcommand == "noise-compare") return noise_cmd(cfg);
  if (subcommand == "perturb") return perturb_cmd(cfg);
  if (subcommand == "discrepancies") return discrepancies_cmd(cfg);
  throw DomainError("cli", "unknown subcommand '" + subcommand + "'");
}

nlohmann::ordered_json make_summary(const std::string& subcommand, const ExperimentConfig& cfg,
                                    const CommandOutput& output) {
  json files = json::array();
  for (const auto& f : output.files) files.push_back(f.name);
  return json{{"schema_version", kSchemaVersion},
              {"subcommand", subcommand},
              {"git_revision", git_revision()},
              {"config", cfg.to_json()},
              {"results", output.results},
              {"files", files}};
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    os << content;
    os.flush();
    if (!os) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error("cli", "failed to write " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cli", "failed to move output into place at " + path.string());
  }
}

std::vector<std::filesystem::path> run(const std::string& subcommand, const ExperimentConfig& cfg,
                                       const std::filesystem::path& out_dir, bool quiet, std::ostream& out) {
  const CommandOutput result = execute(subcommand, cfg);
  const std::string summary = make_summary(subcommand, cfg, result).dump(2) + "\n";

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cli", "cannot create output directory " + out_dir.string());

  std::vector<std::filesystem::path> written;
  for (const auto& f : result.files) {
    written.push_back(out_dir / f.name);
    write_atomic(written.back(), f.content);
  }
  written.push_back(out_dir / (subcommand + ".summary.json"));
  write_atomic(written.back(), summary);
  if (!quiet) out << result.text;
  return written;
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weak-measurement atom interferometry simulator", "lpai"};
  std::string subcommand;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool quiet = false;
  app.add_option("subcommand", subcommand, "What to compute")
      ->required()
      ->check(CLI::IsMember(subcommands()));
  app.add_option("--config", config_path, "YAML configuration file")->required();
  auto* out_opt = app.add_option("--out", out_dir, "Output directory (overrides config 'output')");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (overrides config 'seed')");
  app.add_flag("--quiet", quiet, "Suppress the stdout report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw Error("cli", "cannot read config file " + config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    ExperimentConfig cfg = parse_config(buf.str());
    if (*seed_opt) cfg.seed = seed;
    if (*out_opt) cfg.output = out_dir;
    run(subcommand, cfg, cfg.output, quiet, out);
  } catch (const std::exception& e) {
    err << "lpai: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace lpai::app
