#include "lpai/qdyn.hpp"

#include <algorithm>
#include <cmath>

#include "lpai/constants.hpp"
#include "lpai/errors.hpp"

namespace lpai::qdyn {

namespace {

constexpr const char* kModule = "qdyn";
constexpr Complex kI{0.0, 1.0};

}  // namespace

TwoLevelState::TwoLevelState(Complex g, Complex e) {
  const double n = std::sqrt(std::norm(g) + std::norm(e));
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw DomainError(kModule, "cannot normalize a zero or non-finite state vector");
  }
  g_ = g / n;
  e_ = e / n;
}

TwoLevelState TwoLevelState::pre_selection(double phi) {
  const double s = 1.0 / std::sqrt(2.0);
  return {s, -kI * std::exp(kI * phi) * s};
}

TwoLevelState TwoLevelState::post_selection(double theta) {
  return {std::cos(theta), kI * std::sin(theta)};
}

Operator2 Operator2::operator*(const Operator2& r) const {
  return {m_[0] * r.m_[0] + m_[1] * r.m_[2], m_[0] * r.m_[1] + m_[1] * r.m_[3],
          m_[2] * r.m_[0] + m_[3] * r.m_[2], m_[2] * r.m_[1] + m_[3] * r.m_[3]};
}

Operator2 Operator2::operator+(const Operator2& r) const {
  return {m_[0] + r.m_[0], m_[1] + r.m_[1], m_[2] + r.m_[2], m_[3] + r.m_[3]};
}

Operator2 Operator2::operator*(Complex s) const {
  return {m_[0] * s, m_[1] * s, m_[2] * s, m_[3] * s};
}

Operator2 Operator2::adjoint() const {
  return {std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3])};
}

bool Operator2::is_hermitian(double tol) const {
  const Operator2 a = adjoint();
  for (std::size_t i = 0; i < 4; ++i) {
    if (std::abs(m_[i] - a.m_[i]) > tol) return false;
  }
  return true;
}

bool Operator2::is_unitary(double tol) const {
  const Operator2 p = adjoint() * (*this);
  const Operator2 id = identity();
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      if (std::abs(p(r, c) - id(r, c)) > tol) return false;
    }
  }
  return true;
}

Complex inner(const Amplitudes& a, const Amplitudes& b) {
  return std::conj(a.g) * b.g + std::conj(a.e) * b.e;
}

Complex matrix_element(const Amplitudes& a, const Operator2& op, const Amplitudes& b) {
  return inner(a, op.apply(b));
}

BlochAxis::BlochAxis(double x, double y, double z) : x_(x), y_(y), z_(z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (!(std::abs(n - 1.0) <= 1e-12)) {
    throw DomainError(kModule, "pulse axis must have unit norm");
  }
}

Operator2 PulseOp::matrix() const {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  const Operator2 n_sigma = Operator2::pauli_x() * axis.x() + Operator2::pauli_y() * axis.y() +
                            Operator2::pauli_z() * axis.z();
  return Operator2::identity() * c + n_sigma * (-kI * s);
}

TwoLevelState apply_pulse(const TwoLevelState& state, const PulseOp& pulse) {
  const Amplitudes out = pulse.matrix().apply(state.amplitudes());
  return {out.g, out.e};
}

bool equal_up_to_phase(const TwoLevelState& a, const TwoLevelState& b, double tol) {
  return std::abs(inner(a.amplitudes(), b.amplitudes())) >= 1.0 - tol;
}

EffectiveRabi effective_rabi(const RamanParams& p) {
  if (p.detuning == 0.0) {
    throw DomainError(kModule, "effective Rabi frequency needs a nonzero detuning");
  }
  const Complex omega = p.rabi_1 * std::conj(p.rabi_2) / (2.0 * p.detuning);
  const double largest = std::max(std::abs(p.rabi_1), std::abs(p.rabi_2));
  return {omega, std::abs(p.detuning) >= kLargeDetuningMargin * largest};
}

KinematicPhases free_evolution_phases(double v_g, double k_eff, double mass, double t,
                                      double phi_field) {
  if (!(mass > 0.0)) throw DomainError(kModule, "mass must be positive");
  if (!(t >= 0.0)) throw DomainError(kModule, "evolution time must be non-negative");
  using constants::hbar;
  const double v_e = v_g + hbar * k_eff / (2.0 * mass);
  return {0.5 * mass * v_g * v_g * t / hbar, 0.5 * mass * v_e * v_e * t / hbar, phi_field};
}

double wrap_phase(double phase) {
  constexpr double two_pi = 2.0 * constants::pi;
  double r = std::fmod(phase, two_pi);  // (-2pi, 2pi)
  if (r > constants::pi) r -= two_pi;
  if (r <= -constants::pi) r += two_pi;
  return r;
}

double relative_phase(const KinematicPhases& p) {
  return wrap_phase(p.phi_e - p.phi_g + p.phi_field);
}

Complex postselect_overlap(const TwoLevelState& pre, const TwoLevelState& post) {
  return inner(post.amplitudes(), pre.amplitudes());
}

WeakValue weak_value(const TwoLevelState& pre, const TwoLevelState& post, const Operator2& observable) {
  if (!observable.is_hermitian()) {
    throw DomainError(kModule, "weak value observable must be Hermitian");
  }
  const Complex overlap = postselect_overlap(pre, post);
  if (std::abs(overlap) <= kOverlapFloor) {
    throw SingularPostSelection(kModule, "post-selection overlap below 1e-8; weak value diverges");
  }
  const Complex w = matrix_element(post.amplitudes(), observable, pre.amplitudes()) / overlap;
  return {w.real(), w.imag()};
}

WeakValue pointer_weak_value(double theta, double phi) {
  return weak_value(TwoLevelState::pre_selection(phi), TwoLevelState::post_selection(theta),
                    Operator2::pauli_z() * 0.5);
}

ClosedFormReport closed_form_weak_value(double theta, double phi) {
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  if (std::abs(s) < 1e-15 || std::abs(c) < 1e-15) {
    throw DomainError(kModule, "cot(theta) undefined or zero at this theta");
  }
  const double cot = c / s;
  const double den = cot * cot - 2.0 * std::cos(phi) * cot + 1.0;
  if (std::abs(den) < 1e-300) {
    throw DomainError(kModule, "closed-form denominator vanishes");
  }

  ClosedFormReport r{};
  r.theta = theta;
  r.phi = phi;
  r.closed_form = {1.0 + (2.0 * std::cos(phi) * cot + 2.0) / den,
                   (-2.0 * std::sin(phi) * cot) / den};

  const auto pre = TwoLevelState::pre_selection(phi);
  const auto post = TwoLevelState::post_selection(theta);
  r.definition_sigma_z = weak_value(pre, post, Operator2::pauli_z());
  r.definition_half = weak_value(pre, post, Operator2::pauli_z() * 0.5);
  r.mismatch_sigma_z = std::abs(r.closed_form.value() - r.definition_sigma_z.value());
  r.mismatch_half = std::abs(r.closed_form.value() - r.definition_half.value());
  const double scale = std::max(1.0, std::abs(r.definition_sigma_z.value()));
  r.consistent = std::min(r.mismatch_sigma_z, r.mismatch_half) <= 1e-9 * scale;
  return r;
}

Complex PostSelectionSequence::success_amplitude(const TwoLevelState& state) const {
  return to_ground.matrix().apply(state.amplitudes()).g;
}

Amplitudes PostSelectionSequence::apply_to_ground(const TwoLevelState& state) const {
  return projector.apply(to_ground.matrix().apply(state.amplitudes()));
}

Amplitudes PostSelectionSequence::apply(const TwoLevelState& state) const {
  return restore.matrix().apply(apply_to_ground(state));
}

Operator2 PostSelectionSequence::as_operator() const {
  return restore.matrix() * projector * to_ground.matrix();
}

PostSelectionSequence postselection_pulse_sequence(double theta) {
  // post_selection(theta) = R_x(-2 theta)|g>, so R_x(2 theta) maps it to |g>.
  return {theta, PulseOp{BlochAxis::x_axis(), 2.0 * theta}, PulseOp{BlochAxis::x_axis(), -2.0 * theta}};
}

double sequence_projection_deviation(const PostSelectionSequence& seq,
                                     const std::vector<TwoLevelState>& states) {
  const auto post = TwoLevelState::post_selection(seq.theta).amplitudes();
  double worst = 0.0;
  for (const auto& s : states) {
    const Amplitudes via_pulses = seq.apply(s);
    const Complex amp = inner(post, s.amplitudes());
    const Amplitudes direct{amp * post.g, amp * post.e};
    worst = std::max({worst, std::abs(via_pulses.g - direct.g), std::abs(via_pulses.e - direct.e)});
  }
  return worst;
}

}  // namespace lpai::qdyn
