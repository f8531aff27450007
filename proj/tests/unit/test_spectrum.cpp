#include <doctest.h>

#include <cmath>
#include <vector>

#include "lpai/constants.hpp"
#include "lpai/errors.hpp"
#include "lpai/spectrum.hpp"
#include "oracles/reference_values.hpp"
#include "unit/support.hpp"

using namespace lpai;
using namespace lpai::spectrum;
namespace ref = lpai::reference;
using constants::pi;

namespace {
const double kThetaOp = pi / 4 - pi / 1000;
const wavepacket::ThermalParams kCs1K{ref::kCsMass, 1.0};
const LineParams kLine{ref::kProbeFrequency, 0.53e6, kCs1K.thermal_speed()};
const FrequencyGrid kGrid = FrequencyGrid::symmetric(150e6, 6001);

SpectrumProfile gaussian(const FrequencyGrid& g, double centre, double width, double height = 1.0) {
  SpectrumProfile p{g, std::vector<double>(g.size()), false};
  for (std::size_t i = 0; i < g.size(); ++i) p.intensity[i] = height * std::exp(-std::pow((g.at(i) - centre) / width, 2));
  return p;
}

SpectrumProfile delta_kernel(const FrequencyGrid& g) {
  SpectrumProfile k{g, std::vector<double>(g.size(), 0.0), false};
  k.intensity[static_cast<std::size_t>(g.zero_index())] = 1.0 / g.spacing();
  return k;
}
}  // namespace

TEST_CASE("frequency grid") {
  CHECK(kGrid.zero_index() == 3000);
  CHECK(kGrid.at(3000) == 0.0);
  CHECK(FrequencyGrid::symmetric(1.0, 4).zero_index() == -1);
  CHECK(kGrid.spacing() == doctest::Approx(5e4));
  CHECK_THROWS_AS(FrequencyGrid(1.0, -1.0, 11), DomainError);
  CHECK_THROWS_AS(FrequencyGrid(-1.0, 1.0, 2), DomainError);
}

TEST_CASE("Doppler width and frequency mapping") {
  CHECK(test::rel_err(kLine.doppler_half_width(), ref::kDopplerHalfWidthHz_1K) < 1e-10);
  CHECK(test::rel_err(kLine.doppler_fwhm(), 2 * std::sqrt(std::log(2.0)) * ref::kDopplerHalfWidthHz_1K) < 1e-10);
  CHECK(kLine.doppler_fwhm() > 10 * kLine.natural_linewidth);
  test::Gen gen(3);
  for (int i = 0; i < 100; ++i) {
    const double d = gen.uniform(-1e8, 1e8);
    CHECK(std::abs(velocity_to_detuning(detuning_to_velocity(d, kLine.probe_frequency), kLine.probe_frequency) - d) <
          1e-6);
  }
  CHECK(velocity_to_detuning(kCs1K.thermal_speed(), kLine.probe_frequency) ==
        doctest::Approx(kLine.doppler_half_width()).epsilon(1e-12));
}

TEST_CASE("balanced post-selection gives the bare Doppler Gaussian") {
  const auto p = doppler_profile(pi / 4, 0.3, ref::kD2RamanK, kCs1K, kLine, kGrid);
  CHECK(p.max_normalized);
  double worst = 0.0;
  for (std::size_t i = 0; i < kGrid.size(); ++i) {
    const double want = std::exp(-std::pow(kGrid.at(i) / kLine.doppler_half_width(), 2));
    worst = std::max(worst, std::abs(p.intensity[i] - want));
  }
  CHECK(worst < 1e-12);
  CHECK_THROWS_AS(doppler_profile(kThetaOp, 0.01, ref::kD2RamanK, kCs1K, kLine, FrequencyGrid::symmetric(80e6, 1601)),
                  CoverageError);
}

TEST_CASE("first-order profile shape depends on the coupling strength") {
  const auto weak = doppler_profile(kThetaOp, 0.0005, ref::kD2RamanK, kCs1K, kLine, kGrid);
  CHECK_FALSE(bimodality(weak).bimodal);
  const auto strong = doppler_profile(kThetaOp, 0.0005, 1.1e9, kCs1K, kLine, kGrid);
  const auto bm = bimodality(strong);
  CHECK(bm.bimodal);
  REQUIRE(bm.peaks.size() == 2);
  CHECK(bm.peaks[0].detuning < 0.0);
  CHECK(bm.peaks[1].detuning > 0.0);
}

TEST_CASE("direct and wavepacket Doppler paths agree") {
  test::Gen gen(21);
  for (int i = 0; i < 10; ++i) {
    const double phi = gen.uniform(0.0005, 0.1);
    const double k = gen.uniform(1e7, 1.1e9);
    const auto a = doppler_profile(kThetaOp, phi, k, kCs1K, kLine, kGrid);
    const auto b = doppler_profile_via_wavepacket(kThetaOp, phi, k, kCs1K, kLine, kGrid);
    double worst = 0.0;
    for (std::size_t j = 0; j < kGrid.size(); ++j) worst = std::max(worst, std::abs(a.intensity[j] - b.intensity[j]));
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("Lorentzian kernel") {
  const double gamma = 0.53e6;
  const auto k = lorentzian_kernel(gamma, kGrid);
  CHECK(test::rel_err(k.intensity[3000], 2.0 / (pi * gamma)) < 1e-12);
  // Half-maximum crossings are interpolated linearly; resolve them finely.
  const auto w = fwhm(max_normalized(lorentzian_kernel(gamma, FrequencyGrid::symmetric(20e6, 8001))));
  CHECK(test::rel_err(w.width, gamma) < 1e-4);
  CHECK_FALSE(w.multimodal);
  const double mass = lorentzian_window_mass(gamma, 150e6);
  CHECK(test::rel_err(mass, 2.0 / pi * std::atan(2 * 150e6 / gamma)) < 1e-14);
  CHECK(std::abs(k.area() - mass) < 1e-4);
  CHECK(lorentzian_window_mass(gamma, 1e30) == doctest::Approx(1.0));

  CHECK_THROWS_AS(lorentzian_kernel(0.0, kGrid), DomainError);
  CHECK_THROWS_AS(lorentzian_kernel(gamma, FrequencyGrid::symmetric(150e6, 1001)), ResolutionError);
}

TEST_CASE("convolution with a discrete delta is the identity") {
  const auto p = doppler_profile(kThetaOp, 0.01, 1.1e9, kCs1K, kLine, kGrid);
  for (auto mode : {EdgeMode::ConserveMass, EdgeMode::Truncate}) {
    const auto out = convolve(p, delta_kernel(kGrid), mode);
    double worst = 0.0;
    for (std::size_t i = 0; i < kGrid.size(); ++i) worst = std::max(worst, std::abs(out.intensity[i] - p.intensity[i]));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("property: convolution is linear and conserves area") {
  const FrequencyGrid g = FrequencyGrid::symmetric(20e6, 801);
  const auto k = lorentzian_kernel(0.53e6, g);
  test::Gen gen(44);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = gaussian(g, gen.uniform(-15e6, 15e6), gen.uniform(1e6, 5e6), gen.uniform(0.1, 2.0));
    const auto q = gaussian(g, gen.uniform(-15e6, 15e6), gen.uniform(1e6, 5e6), gen.uniform(0.1, 2.0));
    const double a = gen.uniform(-2, 2), b = gen.uniform(-2, 2);
    SpectrumProfile mix{g, std::vector<double>(g.size()), false};
    for (std::size_t i = 0; i < g.size(); ++i) mix.intensity[i] = a * p.intensity[i] + b * q.intensity[i];
    const auto cp = convolve(p, k), cq = convolve(q, k), cm = convolve(mix, k);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      worst = std::max(worst, std::abs(cm.intensity[i] - a * cp.intensity[i] - b * cq.intensity[i]));
      scale = std::max(scale, std::abs(cm.intensity[i]));
    }
    CHECK(worst <= 1e-12 * std::max(scale, 1.0));
    CHECK(test::rel_err(cp.area(), p.area()) < 1e-12);
  }
}

TEST_CASE("truncated convolution loses mass near the edge") {
  const FrequencyGrid g = FrequencyGrid::symmetric(20e6, 801);
  const auto k = lorentzian_kernel(0.53e6, g);
  const auto p = gaussian(g, 19e6, 0.5e6);
  const auto kept = convolve(p, k, EdgeMode::ConserveMass);
  const auto lost = convolve(p, k, EdgeMode::Truncate);
  CHECK(test::rel_err(kept.area(), p.area()) < 1e-12);
  CHECK(lost.area() < 0.99 * p.area());
}

TEST_CASE("convolution errors") {
  const FrequencyGrid g = FrequencyGrid::symmetric(20e6, 801);
  const auto p = gaussian(g, 0.0, 1e6);
  CHECK_THROWS_AS(convolve(p, lorentzian_kernel(0.53e6, kGrid)), DomainError);
  const FrequencyGrid even = FrequencyGrid::symmetric(20e6, 800);
  const auto pe = gaussian(even, 0.0, 1e6);
  SpectrumProfile ke{even, std::vector<double>(even.size(), 1.0), false};
  CHECK_THROWS_AS(convolve(pe, ke), DomainError);
}

TEST_CASE("spectral centroid") {
  CHECK(std::abs(spectral_centroid(gaussian(kGrid, 0.0, 2e7))) < 1e-3);
  CHECK(spectral_centroid(gaussian(kGrid, 1.3e6, 2e6)) == doctest::Approx(1.3e6).epsilon(1e-9));
  SpectrumProfile zero{kGrid, std::vector<double>(kGrid.size(), 0.0), false};
  CHECK_THROWS_AS(spectral_centroid(zero), DomainError);
  CHECK_THROWS_AS(max_normalized(zero), DomainError);
}

TEST_CASE("Lorentzian broadening keeps the sign of the centroid") {
  const auto k = lorentzian_kernel(kLine.natural_linewidth, kGrid);
  test::Gen gen(55);
  for (int i = 0; i < 8; ++i) {
    const double phi = gen.uniform(0.0005, 0.1);
    const auto p = doppler_profile(kThetaOp, phi, 1.1e9, kCs1K, kLine, kGrid);
    const double before = spectral_centroid(p);
    const double after = spectral_centroid(max_normalized(convolve(p, k)));
    CHECK(std::signbit(before) == std::signbit(after));
    CHECK(test::rel_err(after, before) < 1e-3);
  }
}

TEST_CASE("FWHM") {
  const double w = 2e7;
  const auto r = fwhm(gaussian(kGrid, 0.0, w));
  CHECK(test::rel_err(r.width, 2 * std::sqrt(std::log(2.0)) * w) < 1e-5);
  CHECK(r.crossings == 2);
  CHECK_FALSE(r.multimodal);

  auto two = gaussian(kGrid, -4e7, 5e6);
  const auto right = gaussian(kGrid, 4e7, 5e6);
  for (std::size_t i = 0; i < kGrid.size(); ++i) two.intensity[i] += right.intensity[i];
  const auto m = fwhm(two);
  CHECK(m.multimodal);
  CHECK(m.crossings == 4);

  CHECK_THROWS_AS(fwhm(gaussian(kGrid, 1.4e8, 5e7)), DomainError);
}

TEST_CASE("bimodality") {
  CHECK_FALSE(bimodality(gaussian(kGrid, 0.0, 2e7)).bimodal);

  auto two = gaussian(kGrid, -4e7, 5e6);
  const auto right = gaussian(kGrid, 4e7, 5e6, 0.5);
  for (std::size_t i = 0; i < kGrid.size(); ++i) two.intensity[i] += right.intensity[i];
  const auto b = bimodality(two);
  CHECK(b.bimodal);
  REQUIRE(b.peaks.size() == 2);
  CHECK(b.peaks[0].detuning == doctest::Approx(-4e7).epsilon(1e-3));
  CHECK(b.peaks[1].height == doctest::Approx(0.5).epsilon(1e-3));

  auto bump = gaussian(kGrid, 0.0, 2e7);
  const auto small = gaussian(kGrid, 8e7, 2e6, 0.01);
  for (std::size_t i = 0; i < kGrid.size(); ++i) bump.intensity[i] += small.intensity[i];
  CHECK_FALSE(bimodality(bump).bimodal);
}

TEST_CASE("transit time") {
  const double lifetime = 1.0 / (2 * pi * 0.53e6);
  const auto r = transit_time_check(1e-3, kCs1K.thermal_speed(), lifetime);
  CHECK(test::rel_err(r.transit_time, ref::kTransitTime_1mm_1K) < 1e-12);
  CHECK(r.ratio == doctest::Approx(r.transit_time / lifetime));
  CHECK(r.negligible);

  const auto q = transit_time_report(1e-6, 3e-7);
  CHECK_FALSE(q.negligible);
  CHECK(transit_time_report(3e-3, 3e-7).negligible);
  CHECK_THROWS_AS(transit_time_check(0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(transit_time_check(1e-3, 1.0, 0.0), DomainError);
}
