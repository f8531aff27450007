#pragma once

// Thermal velocity distributions along the beam axis and their post-selected
// counterparts: the exact two-branch interference density and the first-order
// weak-value expansion.

#include <cstddef>
#include <span>
#include <vector>

#include "lpai/qdyn.hpp"

namespace lpai::wavepacket {

struct ThermalParams {
  double mass;         // kg
  double temperature;  // K

  /// Throws DomainError unless both are positive.
  void validate() const;

  /// sqrt(2 k_B T / m), the 1/e half-width of f(v).
  double thermal_speed() const;
  /// sqrt(k_B T / m), the standard deviation of f(v).
  double velocity_sigma() const;
  /// sqrt(m k_B T), the standard deviation of the momentum distribution.
  double momentum_sigma() const;
};

/// Uniform grid v_i = v_min + i * spacing, i = 0 .. n_points - 1.
class VelocityGrid {
 public:
  /// Throws DomainError unless v_min < v_max and n_points >= 3.
  VelocityGrid(double v_min, double v_max, std::size_t n_points);

  /// Grid on [-half_span, half_span].
  static VelocityGrid symmetric(double half_span, std::size_t n_points);

  double v_min() const { return v_min_; }
  double v_max() const { return v_max_; }
  std::size_t size() const { return n_; }
  double spacing() const { return (v_max_ - v_min_) / static_cast<double>(n_ - 1); }
  double at(std::size_t i) const;
  std::vector<double> points() const;

  bool operator==(const VelocityGrid&) const = default;

 private:
  double v_min_;
  double v_max_;
  std::size_t n_;
};

/// Composite trapezoid rule on a uniform grid.
double trapezoid(std::span<const double> values, double spacing);

/// Profile sampled on a velocity grid (s/m when normalized).
class Density {
 public:
  /// Throws DomainError on size mismatch, non-finite samples, or negative
  /// samples when signed_ok is false.
  Density(VelocityGrid grid, std::vector<double> values, bool signed_ok, bool normalized);

  const VelocityGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  bool signed_ok() const { return signed_ok_; }
  bool normalized() const { return normalized_; }

  double integral() const;

 private:
  VelocityGrid grid_;
  std::vector<double> values_;
  bool signed_ok_;
  bool normalized_;
};

/// Half-width-in-thermal-speeds that a grid has to cover for the thermal packet.
inline constexpr double kMinimumSpanThermalSpeeds = 5.0;

/// Per-branch velocity offset hbar k_eff / (2 m).
double branch_offset(double k_eff, double mass);

/// f(v) = sqrt(m / (2 pi k_B T)) exp(-m v^2 / (2 k_B T)).
double maxwell_boltzmann_pdf(const ThermalParams& params, double v);

/// Throws CoverageError unless the grid spans +-5 thermal speeds.
Density maxwell_boltzmann(const ThermalParams& params, const VelocityGrid& grid);

struct PostSelectedPacket {
  Density density;             // normalized conditional density
  double success_probability;  // grid integral before normalization
};

/// Exact conditional density |c(v)|^2 / P with
///   c(v) = [cos(theta) a(v - dv) - e^{i phi} sin(theta) a(v + dv)] / sqrt(2),
/// a = sqrt(f), dv = hbar k_eff / (2 m). Throws CoverageError if the grid does
/// not cover both shifted packets and SingularPostSelection if P < 1e-12.
PostSelectedPacket exact_postselected(double theta, double phi, double k_eff,
                                      const ThermalParams& params, const VelocityGrid& grid);

inline constexpr double kMinimumSuccessProbability = 1e-12;

struct FirstOrderPacket {
  /// f(v) (1 - slope v); integrates to one, may go negative.
  Density signed_profile;
  /// |signed_profile| normalized to unit integral.
  Density density;
  /// <sigma_z/2>_w used for the expansion.
  qdyn::WeakValue weak;
  /// hbar k_eff Re<sigma_z/2>_w / (k_B T), in s/m.
  double slope;
};

/// First-order post-selected density F(v) = A0 f(v) [1 - hbar k Re(A_w) v / (k_B T)].
FirstOrderPacket firstorder_postselected(double theta, double phi, double k_eff,
                                         const ThermalParams& params, const VelocityGrid& grid);

/// Closed form for the centroid of the signed first-order profile,
/// -(hbar k_eff / m) Re<sigma_z/2>_w.
double firstorder_centroid_closed_form(double theta, double phi, double k_eff, double mass);

/// Integral of v d(v) over integral of d(v). Throws DomainError when the
/// integral vanishes.
double centroid(const Density& d);

/// |centroid(exact)| in units of the single-branch offset hbar k_eff / (2 m).
/// Throws DomainError for k_eff = 0.
double amplification_factor(const Density& exact, double k_eff, double mass);

}  // namespace lpai::wavepacket
