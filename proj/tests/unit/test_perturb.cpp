#include <doctest.h>

#include <cmath>

#include "lpai/constants.hpp"
#include "lpai/errors.hpp"
#include "lpai/perturb.hpp"
#include "lpai/qdyn.hpp"
#include "oracles/reference_values.hpp"
#include "unit/support.hpp"

using namespace lpai;
using namespace lpai::perturb;
namespace ref = lpai::reference;
using constants::pi;

namespace {
const double kThetaOp = pi / 4 - pi / 1000;
const wavepacket::ThermalParams kCs1K{ref::kCsMass, 1.0};
const auto kGrid = wavepacket::VelocityGrid::symmetric(6 * kCs1K.thermal_speed(), 4096);
}  // namespace

TEST_CASE("AC-Stark phase") {
  const auto r = ac_stark_phase({2 * pi * 1e5, 2 * pi * 1e7, 1e-6});
  CHECK(test::rel_err(r.phase, pi * 1e-3) < 1e-12);
  CHECK(r.regime_ok);
  CHECK(r.warning.empty());

  const auto near = ac_stark_phase({2 * pi * 1e5, 2 * pi * 5e5, 1e-6});
  CHECK_FALSE(near.regime_ok);
  CHECK_FALSE(near.warning.empty());

  CHECK_THROWS_AS(ac_stark_phase({1e5, 0.0, 1e-6}), DomainError);
  CHECK(ac_stark_phase({0.0, 1e7, 1e-6}).phase == 0.0);
}

TEST_CASE("property: AC-Stark phase scaling") {
  test::Gen gen(61);
  for (int i = 0; i < 200; ++i) {
    const StarkParams p{gen.uniform(1e3, 1e6), gen.uniform(1e7, 1e9), gen.uniform(1e-7, 1e-4)};
    const double base = ac_stark_phase(p).phase;
    CHECK(ac_stark_phase({p.rabi, -p.detuning, p.duration}).phase == doctest::Approx(-base).epsilon(1e-14));
    CHECK(test::rel_err(ac_stark_phase({2 * p.rabi, p.detuning, p.duration}).phase, 4 * base) < 1e-14);
    CHECK(test::rel_err(ac_stark_phase({p.rabi, p.detuning, 3 * p.duration}).phase, 3 * base) < 1e-14);
    CHECK(test::rel_err(ac_stark_phase({p.rabi, 2 * p.detuning, p.duration}).phase, base / 2) < 1e-14);
  }
}

TEST_CASE("Berry phase") {
  const auto r = berry_phase({2 * pi * 1e5, 2 * pi * 1e6, 2 * pi * 1e4});
  const double cone = std::atan(0.1);
  CHECK(test::rel_err(r.cone_angle, cone) < 1e-14);
  CHECK(test::rel_err(r.solid_angle, 2 * pi * (1 - std::cos(cone))) < 1e-12);
  CHECK(test::rel_err(r.result.phase, -pi * (1 - std::cos(cone))) < 1e-12);
  CHECK(r.result.regime_ok);

  const auto fast = berry_phase({2 * pi * 1e5, 2 * pi * 1e6, 2 * pi * 1e6});
  CHECK_FALSE(fast.result.regime_ok);
  CHECK_FALSE(fast.result.warning.empty());

  const auto resonant = berry_phase({1e5, 0.0, 1e3});
  CHECK(resonant.cone_angle == doctest::Approx(pi / 2));
  CHECK(resonant.result.phase == doctest::Approx(-pi));

  CHECK(berry_phase({0.0, 1e6, 1e3}).result.phase == 0.0);
  CHECK_THROWS_AS(berry_phase({0.0, 0.0, 1e3}), DomainError);
}

TEST_CASE("property: Berry phase bounds and small-cone limit") {
  test::Gen gen(62);
  for (int i = 0; i < 200; ++i) {
    const double rabi = gen.uniform(1e3, 1e7), det = gen.uniform(-1e7, 1e7);
    const auto r = berry_phase({rabi, det, 0.0});
    CHECK(r.result.phase <= 0.0);
    CHECK(r.result.phase >= -pi);
    CHECK(r.solid_angle == doctest::Approx(-2 * r.result.phase));
  }
  for (double ratio : {1e-2, 1e-3, 1e-4}) {
    const auto r = berry_phase({ratio * 1e6, 1e6, 0.0});
    CHECK(test::rel_err(r.result.phase, -pi * ratio * ratio / 2) < ratio);
  }
}

TEST_CASE("amplified pointer shift") {
  const double phase = 1e-4;
  const auto s = amplified_pointer_shift(phase, kThetaOp, 0.01, ref::kD2RamanK, kCs1K, kGrid);
  const auto w = qdyn::weak_value(qdyn::TwoLevelState::pre_selection(0.01), qdyn::TwoLevelState::post_selection(kThetaOp),
                                  qdyn::Operator2::pauli_z());
  CHECK(s.im_weak_sigma_z == doctest::Approx(w.im));
  CHECK(s.im_weak_half == doctest::Approx(w.im / 2));
  CHECK(s.linear_half == doctest::Approx(s.linear_sigma_z / 2));
  CHECK(test::rel_err(s.linear_sigma_z, 0.5 * constants::hbar * ref::kD2RamanK * w.im * phase) < 1e-12);

  // Linear rule and full pipeline point the same way.
  CHECK(std::signbit(s.linear_sigma_z) == std::signbit(s.pipeline));
  CHECK(s.pipeline != 0.0);
  CHECK(test::rel_err(s.pipeline, s.linear_response) < 0.2);
  CHECK(test::rel_err(s.pipeline / s.linear_sigma_z, -w.re) < 0.2);

  const auto zero = amplified_pointer_shift(0.0, kThetaOp, 0.01, ref::kD2RamanK, kCs1K, kGrid);
  CHECK(zero.pipeline == 0.0);
  CHECK(zero.linear_sigma_z == 0.0);
  CHECK(zero.linear_response == 0.0);

  CHECK_THROWS_AS(amplified_pointer_shift(1e-4, pi / 4, 0.0, 0.0, kCs1K, kGrid), SingularPostSelection);
}

TEST_CASE("pointer shift is odd in the phase and its slope is continuous at zero") {
  const auto a = amplified_pointer_shift(1e-5, kThetaOp, 0.01, ref::kD2RamanK, kCs1K, kGrid);
  const auto b = amplified_pointer_shift(-1e-5, kThetaOp, 0.01, ref::kD2RamanK, kCs1K, kGrid);
  CHECK(test::rel_err(-b.pipeline, a.pipeline) < 0.01);
  const auto c = amplified_pointer_shift(1e-4, kThetaOp, 0.01, ref::kD2RamanK, kCs1K, kGrid);
  CHECK(test::rel_err(c.pipeline / 1e-4, a.pipeline / 1e-5) < 0.02);
  CHECK(test::rel_err(a.pipeline, a.linear_response) < 0.02);
}

TEST_CASE("perturbation phases feed the pointer shift") {
  const auto stark = ac_stark_phase({2 * pi * 1e5, 2 * pi * 1e7, 1e-6});
  const auto berry = berry_phase({2 * pi * 1e5, 2 * pi * 1e6, 2 * pi * 1e4});
  for (double phase : {stark.phase, berry.result.phase}) {
    const auto s = amplified_pointer_shift(phase, kThetaOp, 0.01, ref::kD2RamanK, kCs1K, kGrid);
    CHECK(std::signbit(s.linear_sigma_z) == std::signbit(s.pipeline));
    CHECK(std::isfinite(s.pipeline));
  }
}
