#pragma once

// Physical constants (SI) and the cesium reference data the default
// configuration is built from. Values are CODATA 2018 / NIST ASD.

#include <numbers>

namespace lpai::constants {

inline constexpr double pi = std::numbers::pi;

inline constexpr double hbar = 1.054571817e-34;           // J s (exact)
inline constexpr double boltzmann = 1.380649e-23;         // J/K (exact)
inline constexpr double speed_of_light = 299792458.0;     // m/s (exact)
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg

// 133Cs atomic mass, 132.905451961 u.
inline constexpr double cesium_mass = 132.905451961 * atomic_mass_unit;

// Cs D2 line (6S1/2 -> 6P3/2), 351.72571850 THz.
inline constexpr double cesium_d2_frequency = 351.72571850e12;

/// Effective wavevector of a counter-propagating Raman pair near the D2 line,
/// k_eff = k1 + k2 ~ 2 * 2 pi / lambda_D2.
inline constexpr double cesium_d2_raman_k_eff =
    2.0 * 2.0 * pi * cesium_d2_frequency / speed_of_light;

// 6S1/2 -> 8P3/2 probe. Level energy 25791.508 cm^-1 above the ground state.
inline constexpr double cesium_8p32_frequency = 25791.508 * 100.0 * speed_of_light;

// Natural linewidth (FWHM) of 8P3/2.
inline constexpr double cesium_8p32_linewidth = 0.53e6;  // Hz

}  // namespace lpai::constants
