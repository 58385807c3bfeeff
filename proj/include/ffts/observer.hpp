#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ffts/ffts_math.hpp"
#include "ffts/lie.hpp"
#include "ffts/sim.hpp"
#include "ffts/types.hpp"

namespace ffts {

struct TranslationalEsoState {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 force = Vec3::Zero();  // disturbance force estimate
};

struct RotationalEsoState {
  Rotation attitude = Rotation::Identity();
  Vec3 angular_velocity = Vec3::Zero();
  Vec3 torque = Vec3::Zero();  // disturbance torque estimate
};

/// Translational rates share the state layout.
using TranslationalEsoRate = TranslationalEsoState;

/// attitude_rate is the body rate w with R_hat' = R_hat w^x.
struct RotationalEsoRate {
  Vec3 attitude_rate;
  Vec3 angular_acceleration;
  Vec3 torque_rate;
};

struct EsoGains {
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double kappa = 0.0;
  HolderExponent p{1.2};
  std::optional<MorseGain> morse;  // rotational observer only
  Mat2 lyapunov_weight = Mat2::Identity();

  DiffGains diff() const { return {k1, k2, k3}; }
  /// Throws kInvalidGains for non-finite or negative entries, or a missing Morse gain
  /// when `rotational` is set.
  void check(bool rotational) const;
};

struct EsoErrors {
  Vec3 position;      // e_b = b - b_hat
  Vec3 velocity;      // e_v = v - v_hat
  Vec3 force;         // e_phi = phi_D - phi_hat
  Rotation attitude;  // E_R = R_hat^T R
  Vec3 angular_velocity;  // e_Omega = Omega - E_R^T Omega_hat
  Vec3 torque;            // e_tau = tau_D - tau_hat
};

struct ConstraintCheck {
  std::string name;
  double value = 0.0;  // positive when satisfied
  bool passed = false;
};

struct EsoGainReport {
  bool hurwitz = false;
  std::optional<LyapunovPair> lyapunov;
  std::vector<ConstraintCheck> constraints;
  double gamma1 = 0.0;  // Gamma_1 of the error Lyapunov inequality
  double gamma2 = 0.0;
  // Set when the configured weight Q0 fails: the report was evaluated at Q = c Q0.
  std::optional<double> certificate_scale;

  bool passes() const;
  bool kappa_only_failure() const;
};

// ---------------------------------------------------------------------------

/// psi_t = e_v + kappa [e_b + (e_b^T e_b)^((1-p)/p) e_b].
Vec3 translational_psi(const Vec3& e_b, const Vec3& e_v, const EsoGains& gains);

TranslationalEsoRate translational_eso_rhs(const TranslationalEsoState& state, const Vec3& meas_b,
                                           const Vec3& meas_v, const Rotation& r, double thrust,
                                           const EsoGains& gains, double mass);

/// e_R = s_K(E_R), e_Omega as above; psi_a = e_Omega + kappa [e_R + (e_R^T e_R)^((1-p)/p) e_R].
Vec3 rotational_psi(const Rotation& e_r, const Vec3& e_omega, const EsoGains& gains);

RotationalEsoRate rotational_eso_rhs(const RotationalEsoState& state, const Rotation& meas_r,
                                     const Vec3& meas_omega, const Vec3& torque,
                                     const EsoGains& gains, const Mat3& inertia);

/// Both observers with p replaced by its Lipschitz limit p = 1.
EsoGains lipschitz_limit(const EsoGains& gains);
TranslationalEsoRate limiting_linear_eso_rhs(const TranslationalEsoState& state,
                                             const Vec3& meas_b, const Vec3& meas_v,
                                             const Rotation& r, double thrust,
                                             const EsoGains& gains, double mass);
RotationalEsoRate limiting_linear_eso_rhs(const RotationalEsoState& state, const Rotation& meas_r,
                                          const Vec3& meas_omega, const Vec3& torque,
                                          const EsoGains& gains, const Mat3& inertia);

EsoErrors compute_eso_errors(const RigidBodyState& plant, const TranslationalEsoState& t_state,
                             const RotationalEsoState& r_state, const Vec3& true_force,
                             const Vec3& true_torque);

// ---------------------------------------------------------------------------
// Error dynamics written directly in error coordinates, used as an independent
// check of the observer equations.

struct TranslationalErrorRate {
  Vec3 position;
  Vec3 velocity;
  Vec3 force;
};

/// e_b' = e_v, e_v' = -k1 phi1(psi_t) - kappa[...] + e_phi / m, e_phi' = phi_D' - m k2 phi2(psi_t).
TranslationalErrorRate translational_error_rhs(const EsoErrors& e, const Vec3& force_rate,
                                               const EsoGains& gains, double mass);

struct RotationalErrorRate {
  Vec3 attitude_rate;  // E_R' = E_R e_Omega^x
  Vec3 angular_acceleration;
  Vec3 torque;
};

/// J e_Omega' = e_tau - k1 J phi1(psi_a) - kappa J [(e_R^T e_R)^b H e_w + e_w],
/// e_tau' = tau_D' - J k2 phi2(psi_a).
RotationalErrorRate rotational_error_rhs(const EsoErrors& e, const Vec3& torque_rate,
                                         const EsoGains& gains, const Mat3& inertia);

// ---------------------------------------------------------------------------

struct EsoDecay {
  double eigen_margin = 0.0;  // left side of the eigenvalue constraint
  double gamma1 = 0.0;
  double gamma2 = 0.0;
};

/// Decay constants of the observer error Lyapunov function for a given solution pair.
EsoDecay translational_decay(const EsoGains& gains, const LyapunovPair& pair);
EsoDecay rotational_decay(const EsoGains& gains, const LyapunovPair& pair);

/// Evaluates the constraints at the configured weight Q; if the eigenvalue inequality
/// fails there, reports the scaled weight c Q that satisfies it (Q is a free choice).
EsoGainReport validate_translational_gains(const EsoGains& gains);
EsoGainReport validate_rotational_gains(const EsoGains& gains);

/// V_t = zeta^T P_t zeta + e_b^T e_b with zeta = [phi1(psi_t); e_phi / m].
double translational_eso_lyapunov(const EsoErrors& e, const EsoGains& gains,
                                  const LyapunovPair& pair, double mass);

/// V_a = zeta^T P_a zeta + <K, I - E_R> with zeta = [phi1(psi_a); J^-1 e_tau].
double rotational_eso_lyapunov(const EsoErrors& e, const EsoGains& gains,
                               const LyapunovPair& pair, const Mat3& inertia);

}  // namespace ffts
