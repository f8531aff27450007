#pragma once

// Perturbations loaded during free evolution that add to the relative phase:
// a differential AC-Stark shift and an adiabatic Berry phase. Their effect on
// the post-selected pointer is predicted both by the linear weak-value rule
// and by the full exact-density pipeline.

#include <string>

#include "lpai/wavepacket.hpp"

namespace lpai::perturb {

inline constexpr double kFarDetunedMargin = 10.0;
inline constexpr double kAdiabaticMargin = 10.0;

struct StarkParams {
  double rabi;      // rad/s
  double detuning;  // rad/s
  double duration;  // s

  /// |detuning| >= 10 |rabi|.
  bool far_detuned() const;
};

struct BerryParams {
  double rabi;        // rad/s
  double detuning;    // rad/s
  double sweep_rate;  // rad/s, rate of the field phase alpha

  /// sweep_rate <= sqrt(rabi^2 + detuning^2) / 10.
  bool adiabatic() const;
};

struct PhaseResult {
  double phase;         // rad
  bool regime_ok;       // far-detuned / adiabatic condition holds
  std::string warning;  // empty when regime_ok
};

/// Omega^2 tau / (2 delta): differential phase between the +-hbar Omega^2 / (4 delta)
/// level shifts. Throws DomainError for delta = 0.
PhaseResult ac_stark_phase(const StarkParams& p);

struct BerryResult {
  PhaseResult result;   // gamma = -Omega_s / 2
  double cone_angle;    // arctan(Omega / delta)
  double solid_angle;   // 2 pi (1 - cos cone_angle)
};

/// Geometric phase of one adiabatic loop of the effective field around z.
/// Throws DomainError when rabi and detuning are both zero.
BerryResult berry_phase(const BerryParams& p);

struct PointerShift {
  double phase;                    // rad, the perturbation
  double im_weak_sigma_z;          // Im<sigma_z>_w at the baseline
  double im_weak_half;             // Im<sigma_z/2>_w at the baseline
  /// Linear rule Im(A_w) * phase, expressed in kg m/s with the momentum scale
  /// hbar k_eff / 2 per unit weak value; one value per observable convention.
  double linear_sigma_z;
  double linear_half;
  /// m * [centroid(exact; phi_b + phase) - centroid(exact; phi_b)], kg m/s.
  double pipeline;
  /// -(hbar k_eff / 2) Re<sigma_z>_w Im<sigma_z>_w phase: the slope of the
  /// pipeline at the baseline, kg m/s.
  double linear_response;
};

/// Throws SingularPostSelection when either evaluation point is singular.
PointerShift amplified_pointer_shift(double phase, double theta, double phi_baseline, double k_eff,
                                     const wavepacket::ThermalParams& thermal,
                                     const wavepacket::VelocityGrid& grid);

}  // namespace lpai::perturb
