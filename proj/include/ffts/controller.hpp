#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ffts/ffts_math.hpp"
#include "ffts/lie.hpp"
#include "ffts/observer.hpp"
#include "ffts/types.hpp"

namespace ffts {

struct TranslationalCtrlGains {
  double k_td = 0.0;
  double k_tp = 0.0;
  double kappa = 0.0;
  Vec3 l = Vec3::Ones();  // diagonal of L_T
  HolderExponent p{1.2};

  void check() const;
};

struct AttitudeCtrlGains {
  double k_ad = 0.0;
  double k_ap = 0.0;
  double k_ai = 0.0;
  double kappa = 0.0;
  Vec3 l = Vec3::Ones();  // diagonal of L_A
  MorseGain morse{3.0, 2.0, 1.0};
  HolderExponent p{1.2};

  void check() const;
};

struct AttitudeReference {
  Rotation attitude = Rotation::Identity();
  Vec3 angular_velocity = Vec3::Zero();
  Vec3 angular_acceleration = Vec3::Zero();
};

struct CtrlState {
  Vec3 integral = Vec3::Zero();  // psi_AI
};

struct TorqueCommand {
  Vec3 torque;
  Vec3 integral_rate;  // d psi_AI / dt
};

inline constexpr double kMinThrust = 1e-6;
inline constexpr double kHeadingTolerance = 1e-6;

/// psi_T = v~ + kappa [b~ + (b~^T b~)^((1-p)/p) b~].
Vec3 translational_tracking_psi(const Vec3& b_err, const Vec3& v_err,
                                const TranslationalCtrlGains& g);

/// Commanded force phi = f R e3:
///   m g e3 + k_TD L_T [psi_T + (psi_T^T psi_T)^b psi_T] + k_TP L_T b~
///   + m kappa_T [v~ + (b~^T b~)^b H(b~, (p-1)/p) v~] - m vd' + phi_hat.
Vec3 translational_adrc_force(const Vec3& b_err, const Vec3& v_err, const Vec3& accel_ref,
                              const Vec3& force_estimate, const TranslationalCtrlGains& gains,
                              double mass);

/// Desired attitude with third column phi/|phi| and second column along r3 x heading.
/// A heading parallel to r3 falls back to `previous_r2` or throws kDegenerateHeading.
Rotation attitude_from_force(const Vec3& force, const Vec3& heading,
                             const std::optional<Vec3>& previous_r2 = std::nullopt);

/// R^d, Omega^d and Omega^d' from 5-point central differences of
/// s -> attitude_from_force(force_at(s)) around s = 0 with step delta.
using ForceOffset = std::function<Vec3(double s)>;
AttitudeReference attitude_reference(const ForceOffset& force_at, const Vec3& heading,
                                     double delta = 1e-4,
                                     const std::optional<Vec3>& previous_r2 = std::nullopt);

/// Constant-force overload: Omega^d = Omega^d' = 0.
AttitudeReference attitude_reference(const Vec3& force, const Vec3& heading);

/// psi_A = omega + kappa [s_K(Q) + (s^T s)^((1-p)/p) s].
Vec3 attitude_tracking_psi(const Rotation& q, const Vec3& omega, const AttitudeCtrlGains& g);

/// Attitude torque with integral state; q = R_d^T R and omega = Omega - Q^T Omega_d.
TorqueCommand attitude_adrc_torque(const Rotation& q, const Vec3& omega,
                                   const AttitudeReference& ref, const Vec3& body_rate,
                                   const Vec3& torque_estimate, const CtrlState& ctrl,
                                   const AttitudeCtrlGains& gains, const Mat3& inertia);

/// f = phi^T (R e3).
double thrust_decompose(const Vec3& force, const Rotation& r);

// ---------------------------------------------------------------------------

struct CtrlGainReport {
  std::vector<ConstraintCheck> constraints;
  double gamma_t1 = 0.0;
  double gamma_t2 = 0.0;
  double gamma_a1 = 0.0;
  double gamma_a2 = 0.0;
  // Observer Lyapunov pairs the coupled constraints were evaluated with.
  std::optional<LyapunovPair> translational_pair;
  std::optional<LyapunovPair> rotational_pair;
  // Gamma_t1 needed for the translational coupling at the configured weight.
  double required_gamma_t1 = 0.0;
  std::optional<double> translational_certificate_scale;
  std::optional<double> rotational_certificate_scale;

  bool passes() const;
};

/// Coupled controller/observer constraints and the closed-loop decay constants.
/// When a coupling inequality fails at the observer's configured weight Q, the
/// weight is scaled (Q -> c Q) to search for a certificate.
CtrlGainReport validate_ctrl_gains(const TranslationalCtrlGains& t_gains,
                                   const AttitudeCtrlGains& a_gains,
                                   const EsoGains& t_eso, const EsoGains& a_eso, double mass,
                                   const Mat3& inertia);

// ---------------------------------------------------------------------------

/// V_T = V_t + m/2 psi_T^T psi_T + k_TP/2 b~^T b~.
double translational_adrc_lyapunov(double v_t, const Vec3& b_err, const Vec3& v_err,
                                   const TranslationalCtrlGains& gains, double mass);

/// V_A = V_a + 1/2 psi_A^T J psi_A + k_AP <K, I - Q> + k_AI/2 psi_AI^T psi_AI.
double attitude_adrc_lyapunov(double v_a, const Rotation& q, const Vec3& omega,
                              const CtrlState& ctrl, const AttitudeCtrlGains& gains,
                              const Mat3& inertia);

}  // namespace ffts
