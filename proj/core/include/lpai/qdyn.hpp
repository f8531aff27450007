#pragma once

// Two-level internal-state algebra: states, SU(2) pulses, free-evolution
// phases, post-selection and weak values.
//
// Basis ordering is (|g>, |e>). The Pauli z operator is |e><e| - |g><g|, so
// sigma_z = diag(-1, +1) in this ordering; sigma_x and sigma_y are chosen so
// that sigma_x sigma_y = i sigma_z.

#include <array>
#include <complex>
#include <vector>

namespace lpai::qdyn {

using Complex = std::complex<double>;

/// Unnormalized amplitude pair. Used for projector outputs.
struct Amplitudes {
  Complex g{};
  Complex e{};

  double norm_squared() const { return std::norm(g) + std::norm(e); }
};

/// Normalized internal state. Construction always yields unit norm.
class TwoLevelState {
 public:
  /// Normalizes (g, e). Throws DomainError for the zero vector.
  TwoLevelState(Complex g, Complex e);

  static TwoLevelState ground() { return {1.0, 0.0}; }
  static TwoLevelState excited() { return {0.0, 1.0}; }

  /// (|g> - i e^{i phi} |e>) / sqrt(2): the state after the beam-splitter
  /// pulse and free evolution with relative phase phi.
  static TwoLevelState pre_selection(double phi);

  /// cos(theta)|g> + i sin(theta)|e>.
  static TwoLevelState post_selection(double theta);

  Complex g() const { return g_; }
  Complex e() const { return e_; }
  Amplitudes amplitudes() const { return {g_, e_}; }

 private:
  Complex g_;
  Complex e_;
};

/// 2x2 complex operator in the (g, e) basis, row-major.
class Operator2 {
 public:
  constexpr Operator2() = default;
  constexpr Operator2(Complex gg, Complex ge, Complex eg, Complex ee) : m_{gg, ge, eg, ee} {}

  static Operator2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Operator2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
  static Operator2 pauli_y() { return {0.0, Complex{0.0, 1.0}, Complex{0.0, -1.0}, 0.0}; }
  static Operator2 pauli_z() { return {-1.0, 0.0, 0.0, 1.0}; }
  /// |g><g|
  static Operator2 ground_projector() { return {1.0, 0.0, 0.0, 0.0}; }

  Complex operator()(int row, int col) const { return m_[static_cast<std::size_t>(2 * row + col)]; }

  Amplitudes apply(const Amplitudes& a) const {
    return {m_[0] * a.g + m_[1] * a.e, m_[2] * a.g + m_[3] * a.e};
  }

  Operator2 operator*(const Operator2& rhs) const;
  Operator2 operator+(const Operator2& rhs) const;
  Operator2 operator*(Complex s) const;
  Operator2 adjoint() const;

  bool is_hermitian(double tol = 1e-12) const;
  bool is_unitary(double tol = 1e-12) const;

 private:
  std::array<Complex, 4> m_{};
};

/// <a|A|b> for unnormalized vectors.
Complex matrix_element(const Amplitudes& a, const Operator2& op, const Amplitudes& b);
Complex inner(const Amplitudes& a, const Amplitudes& b);

/// Unit vector on the Bloch sphere.
class BlochAxis {
 public:
  /// Throws DomainError unless |(x, y, z)| = 1 within 1e-12.
  BlochAxis(double x, double y, double z);

  static BlochAxis x_axis() { return {1.0, 0.0, 0.0}; }
  static BlochAxis y_axis() { return {0.0, 1.0, 0.0}; }
  static BlochAxis z_axis() { return {0.0, 0.0, 1.0}; }

  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }

 private:
  double x_, y_, z_;
};

/// Rotation exp(-i angle (n . sigma) / 2).
struct PulseOp {
  BlochAxis axis;
  double angle;  // rad

  PulseOp inverse() const { return {axis, -angle}; }
  Operator2 matrix() const;
};

TwoLevelState apply_pulse(const TwoLevelState& state, const PulseOp& pulse);

/// States equal up to a global phase: |<a|b>| >= 1 - tol.
bool equal_up_to_phase(const TwoLevelState& a, const TwoLevelState& b, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Raman coupling

struct RamanParams {
  Complex rabi_1;         // rad/s
  Complex rabi_2;         // rad/s
  double detuning;        // rad/s, one-photon detuning from the intermediate level
  double omega_internal;  // rad/s
};

struct EffectiveRabi {
  Complex value;             // rad/s
  bool large_detuning_valid; // |detuning| >= 10 max(|rabi_1|, |rabi_2|)
};

inline constexpr double kLargeDetuningMargin = 10.0;

/// Omega = Omega_1 conj(Omega_2) / (2 Delta). Throws DomainError for Delta = 0.
EffectiveRabi effective_rabi(const RamanParams& params);

// ---------------------------------------------------------------------------
// Free evolution

struct KinematicPhases {
  double phi_g;      // rad
  double phi_e;      // rad
  double phi_field;  // rad
};

/// Kinetic phases of the two branches after free evolution for time t. The
/// excited branch moves at v_g + hbar k_eff / (2 m).
KinematicPhases free_evolution_phases(double v_g, double k_eff, double mass, double t,
                                      double phi_field);

/// Wraps to (-pi, pi].
double wrap_phase(double phase);

/// phi_e - phi_g + phi_field, wrapped to (-pi, pi].
double relative_phase(const KinematicPhases& phases);

// ---------------------------------------------------------------------------
// Post-selection and weak values

/// Below this |<post|pre>| the weak value is reported as singular.
inline constexpr double kOverlapFloor = 1e-8;

/// <post|pre>. |result|^2 is the post-selection success probability.
Complex postselect_overlap(const TwoLevelState& pre, const TwoLevelState& post);

struct WeakValue {
  double re;
  double im;

  Complex value() const { return {re, im}; }
};

/// <post|A|pre> / <post|pre>. Throws SingularPostSelection when the overlap
/// is at or below kOverlapFloor and DomainError for non-Hermitian A.
WeakValue weak_value(const TwoLevelState& pre, const TwoLevelState& post, const Operator2& observable);

/// Weak value of sigma_z / 2 between pre_selection(phi) and post_selection(theta).
/// This is the dimensionless factor multiplying hbar k in the first-order pointer shift.
WeakValue pointer_weak_value(double theta, double phi);

/// The closed-form real/imaginary expressions in cot(theta) that accompany the
/// first-order expansion of the post-selected amplitude, evaluated literally,
/// next to the definition-based weak values. The literal expressions do not
/// agree with the definition; the mismatch is reported, not corrected.
struct ClosedFormReport {
  double theta;
  double phi;
  WeakValue closed_form;          // literal expressions (the explicit i in Im dropped)
  WeakValue definition_sigma_z;   // <sigma_z>_w
  WeakValue definition_half;      // <sigma_z/2>_w
  double mismatch_sigma_z;        // |closed_form - definition_sigma_z|
  double mismatch_half;           // |closed_form - definition_half|
  bool consistent;                // min mismatch <= 1e-9 * max(1, |definition|)
};

/// Throws DomainError when cot(theta) is undefined or zero (theta a multiple
/// of pi/2) or the shared denominator vanishes.
ClosedFormReport closed_form_weak_value(double theta, double phi);

// ---------------------------------------------------------------------------
// Experimental realization of the post-selection

/// Post-selection onto post_selection(theta) realized as: rotate by 2 theta
/// about x (maps the post-selected state to |g>), project onto |g>, and
/// optionally rotate back by -2 theta.
struct PostSelectionSequence {
  double theta;
  PulseOp to_ground;  // x rotation by 2 theta
  PulseOp restore;    // x rotation by -2 theta
  Operator2 projector = Operator2::ground_projector();

  /// Amplitude of finding |g> after to_ground; equals <psi_p|state>.
  Complex success_amplitude(const TwoLevelState& state) const;

  /// Rotate, then project onto |g> (atoms left in the ground state).
  Amplitudes apply_to_ground(const TwoLevelState& state) const;

  /// Rotate, project, rotate back. Equals |psi_p><psi_p| state.
  Amplitudes apply(const TwoLevelState& state) const;

  /// The composed operator restore * projector * to_ground.
  Operator2 as_operator() const;
};

PostSelectionSequence postselection_pulse_sequence(double theta);

/// Largest deviation between the pulse sequence and the rank-1 projector onto
/// post_selection(theta) over the given states (amplitude-wise, unnormalized).
double sequence_projection_deviation(const PostSelectionSequence& seq,
                                     const std::vector<TwoLevelState>& states);

}  // namespace lpai::qdyn
