#include "lpai/perturb.hpp"

#include <cmath>

#include "lpai/constants.hpp"
#include "lpai/errors.hpp"

namespace lpai::perturb {

namespace {
constexpr const char* kModule = "perturb";
}

bool StarkParams::far_detuned() const {
  return std::abs(detuning) >= kFarDetunedMargin * std::abs(rabi);
}

bool BerryParams::adiabatic() const {
  return std::abs(sweep_rate) <= std::hypot(rabi, detuning) / kAdiabaticMargin;
}

PhaseResult ac_stark_phase(const StarkParams& p) {
  if (p.detuning == 0.0) throw DomainError(kModule, "AC-Stark phase needs a nonzero detuning");
  PhaseResult r{p.rabi * p.rabi * p.duration / (2.0 * p.detuning), p.far_detuned(), {}};
  if (!r.regime_ok) r.warning = "field is not far detuned (|delta| < 10 Omega); populations may change";
  return r;
}

BerryResult berry_phase(const BerryParams& p) {
  if (p.rabi == 0.0 && p.detuning == 0.0) {
    throw DomainError(kModule, "Berry phase undefined for zero field");
  }
  const double cone = p.detuning == 0.0 ? 0.5 * constants::pi : std::atan(p.rabi / p.detuning);
  const double solid = 2.0 * constants::pi * (1.0 - std::cos(cone));
  BerryResult r{{-0.5 * solid, p.adiabatic(), {}}, cone, solid};
  if (!r.result.regime_ok) r.result.warning = "field phase sweep is not adiabatic";
  return r;
}

PointerShift amplified_pointer_shift(double phase, double theta, double phi_baseline, double k_eff,
                                     const wavepacket::ThermalParams& thermal,
                                     const wavepacket::VelocityGrid& grid) {
  const auto pre = qdyn::TwoLevelState::pre_selection(phi_baseline);
  const auto post = qdyn::TwoLevelState::post_selection(theta);
  const qdyn::WeakValue w = qdyn::weak_value(pre, post, qdyn::Operator2::pauli_z());
  const double scale = 0.5 * constants::hbar * k_eff;

  PointerShift s{};
  s.phase = phase;
  s.im_weak_sigma_z = w.im;
  s.im_weak_half = 0.5 * w.im;
  s.linear_sigma_z = scale * w.im * phase;
  s.linear_half = scale * 0.5 * w.im * phase;
  s.linear_response = -scale * w.re * w.im * phase;

  if (phase == 0.0) {
    s.pipeline = 0.0;
    return s;
  }
  const auto base = wavepacket::exact_postselected(theta, phi_baseline, k_eff, thermal, grid);
  const auto moved = wavepacket::exact_postselected(theta, phi_baseline + phase, k_eff, thermal, grid);
  s.pipeline = thermal.mass * (wavepacket::centroid(moved.density) - wavepacket::centroid(base.density));
  return s;
}

}  // namespace lpai::perturb
