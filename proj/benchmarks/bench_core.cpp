#include <benchmark/benchmark.h>

#include "lpai/constants.hpp"
#include "lpai/harness.hpp"
#include "lpai/spectrum.hpp"
#include "lpai/wavepacket.hpp"

using namespace lpai;

namespace {
const double kTheta = constants::pi / 4 - constants::pi / 1000;
const wavepacket::ThermalParams kThermal{constants::cesium_mass, 1.0};

harness::PipelineConfig config(bool broaden) {
  return {kThermal,
          kTheta,
          1.1e9,
          constants::cesium_8p32_frequency,
          constants::cesium_8p32_linewidth,
          wavepacket::VelocityGrid::symmetric(6 * kThermal.thermal_speed(), 4096),
          spectrum::FrequencyGrid::symmetric(150e6, 6001),
          broaden};
}
}  // namespace

static void BM_ExactPostselected(benchmark::State& state) {
  const auto grid = wavepacket::VelocityGrid::symmetric(6 * kThermal.thermal_speed(), state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(wavepacket::exact_postselected(kTheta, 0.0005, 1.1e9, kThermal, grid));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExactPostselected)->Arg(1024)->Arg(4096)->Arg(16384);

static void BM_Convolve(benchmark::State& state) {
  const auto cfg = config(false);
  const auto grid = spectrum::FrequencyGrid::symmetric(150e6, static_cast<std::size_t>(state.range(0)));
  const auto profile = spectrum::doppler_profile(kTheta, 0.0005, cfg.k_eff, kThermal, cfg.line(), grid);
  const auto kernel = spectrum::lorentzian_kernel(cfg.natural_linewidth, grid);
  for (auto _ : state) benchmark::DoNotOptimize(spectrum::convolve(profile, kernel));
}
BENCHMARK(BM_Convolve)->Arg(6001)->Arg(12001)->Unit(benchmark::kMillisecond);

static void BM_Pipeline(benchmark::State& state) {
  const auto cfg = config(state.range(0) != 0);
  const auto kernel = spectrum::lorentzian_kernel(cfg.natural_linewidth, cfg.fgrid);
  for (auto _ : state) benchmark::DoNotOptimize(harness::run_pipeline(cfg, 0.01, kernel));
}
BENCHMARK(BM_Pipeline)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
