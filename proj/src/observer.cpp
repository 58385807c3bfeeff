#include "ffts/observer.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "gain_search.hpp"

namespace ffts {

void EsoGains::check(bool rotational) const {
  for (double g : {k1, k2, k3, kappa}) {
    if (!std::isfinite(g) || g < 0.0) {
      throw Error(ErrorCode::kInvalidGains, "observer gains must be finite and non-negative");
    }
  }
  if (rotational && !morse) {
    throw Error(ErrorCode::kInvalidGains, "rotational observer needs a Morse gain");
  }
}

bool EsoGainReport::passes() const {
  return hurwitz && std::all_of(constraints.begin(), constraints.end(),
                                [](const ConstraintCheck& c) { return c.passed; });
}

bool EsoGainReport::kappa_only_failure() const {
  if (!hurwitz) return false;
  bool kappa_failed = false;
  for (const auto& c : constraints) {
    if (c.passed) continue;
    if (c.name.find("kappa") == std::string::npos) return false;
    kappa_failed = true;
  }
  return kappa_failed;
}

// ---------------------------------------------------------------------------

namespace {

// kappa [(x^T x)^b H(x, (p-1)/p) y + y]
Vec3 damping_term(const Vec3& x, const Vec3& y, const EsoGains& g) {
  if (x.squaredNorm() < detail::kPowerFloor * detail::kPowerFloor) {
    return g.kappa * y;
  }
  const double s = std::pow(x.squaredNorm(), g.p.psi_power());
  return g.kappa * (s * (h_matrix(x, g.p.h_gain()) * y) + y);
}

void check_inertia(const Mat3& j) {
  if ((j - j.transpose()).norm() > 1e-12 * std::max(1.0, j.norm()) ||
      !(Eigen::SelfAdjointEigenSolver<Mat3>(j, Eigen::EigenvaluesOnly).eigenvalues()(0) > 0.0)) {
    throw Error(ErrorCode::kBadInertia, "inertia must be symmetric positive definite");
  }
}

}  // namespace

Vec3 translational_psi(const Vec3& e_b, const Vec3& e_v, const EsoGains& gains) {
  return e_v + gains.kappa * (e_b + scaled_power(e_b, gains.p.psi_power()));
}

TranslationalEsoRate translational_eso_rhs(const TranslationalEsoState& state, const Vec3& meas_b,
                                           const Vec3& meas_v, const Rotation& r, double thrust,
                                           const EsoGains& gains, double mass) {
  gains.check(false);
  if (!(mass > 0.0)) throw Error(ErrorCode::kInvalidGains, "mass must be positive");
  const Vec3 e_b = meas_b - state.position;
  const Vec3 e_v = meas_v - state.velocity;
  const Vec3 psi = translational_psi(e_b, e_v, gains);

  TranslationalEsoRate d;
  d.position = state.velocity;
  d.velocity = kGravity * e3() + (state.force - thrust * (r * e3())) / mass +
               gains.k1 * phi1(psi, gains.p, gains.k3) + damping_term(e_b, e_v, gains);
  d.force = mass * gains.k2 * phi2(psi, gains.p, gains.k3);
  return d;
}

Vec3 rotational_psi(const Rotation& e_r, const Vec3& e_omega, const EsoGains& gains) {
  const Vec3 s = morse_sk(e_r, *gains.morse);
  return e_omega + gains.kappa * (s + scaled_power(s, gains.p.psi_power()));
}

RotationalEsoRate rotational_eso_rhs(const RotationalEsoState& state, const Rotation& meas_r,
                                     const Vec3& meas_omega, const Vec3& torque,
                                     const EsoGains& gains, const Mat3& inertia) {
  gains.check(true);
  check_inertia(inertia);
  const MorseGain& k = *gains.morse;
  const Rotation e_r = state.attitude.transpose() * meas_r;
  const Vec3 e_omega = meas_omega - e_r.transpose() * state.angular_velocity;
  const Vec3 s = morse_sk(e_r, k);
  const Vec3 e_w = morse_rate(e_r, e_omega, k);
  const Vec3 psi = e_omega + gains.kappa * (s + scaled_power(s, gains.p.psi_power()));

  // J^-1 [J Omega x Omega + tau_hat + tau] + k1 phi1(psi) + kappa [(s^T s)^b H e_w + e_w]
  const Vec3 inner =
      inertia.ldlt().solve((inertia * meas_omega).cross(meas_omega) + state.torque + torque) +
      gains.k1 * phi1(psi, gains.p, gains.k3) + damping_term(s, e_w, gains);

  RotationalEsoRate d;
  d.attitude_rate = state.angular_velocity;
  d.angular_acceleration =
      e_r * inner + e_r * e_omega.cross(e_r.transpose() * state.angular_velocity);
  d.torque_rate = inertia * (gains.k2 * phi2(psi, gains.p, gains.k3));
  return d;
}

EsoGains lipschitz_limit(const EsoGains& gains) {
  EsoGains g = gains;
  g.p = HolderExponent::lipschitz_limit();
  return g;
}

TranslationalEsoRate limiting_linear_eso_rhs(const TranslationalEsoState& state,
                                             const Vec3& meas_b, const Vec3& meas_v,
                                             const Rotation& r, double thrust,
                                             const EsoGains& gains, double mass) {
  return translational_eso_rhs(state, meas_b, meas_v, r, thrust, lipschitz_limit(gains), mass);
}

RotationalEsoRate limiting_linear_eso_rhs(const RotationalEsoState& state, const Rotation& meas_r,
                                          const Vec3& meas_omega, const Vec3& torque,
                                          const EsoGains& gains, const Mat3& inertia) {
  return rotational_eso_rhs(state, meas_r, meas_omega, torque, lipschitz_limit(gains), inertia);
}

EsoErrors compute_eso_errors(const RigidBodyState& plant, const TranslationalEsoState& t_state,
                             const RotationalEsoState& r_state, const Vec3& true_force,
                             const Vec3& true_torque) {
  EsoErrors e;
  e.position = plant.position() - t_state.position;
  e.velocity = plant.velocity - t_state.velocity;
  e.force = true_force - t_state.force;
  e.attitude = r_state.attitude.transpose() * plant.attitude();
  e.angular_velocity = plant.angular_velocity - e.attitude.transpose() * r_state.angular_velocity;
  e.torque = true_torque - r_state.torque;
  return e;
}

// ---------------------------------------------------------------------------

TranslationalErrorRate translational_error_rhs(const EsoErrors& e, const Vec3& force_rate,
                                               const EsoGains& gains, double mass) {
  const Vec3 psi = translational_psi(e.position, e.velocity, gains);
  TranslationalErrorRate d;
  d.position = e.velocity;
  d.velocity = -gains.k1 * phi1(psi, gains.p, gains.k3) -
               damping_term(e.position, e.velocity, gains) + e.force / mass;
  d.force = force_rate - mass * gains.k2 * phi2(psi, gains.p, gains.k3);
  return d;
}

RotationalErrorRate rotational_error_rhs(const EsoErrors& e, const Vec3& torque_rate,
                                         const EsoGains& gains, const Mat3& inertia) {
  const MorseGain& k = *gains.morse;
  const Vec3 s = morse_sk(e.attitude, k);
  const Vec3 e_w = morse_rate(e.attitude, e.angular_velocity, k);
  const Vec3 psi = rotational_psi(e.attitude, e.angular_velocity, gains);
  RotationalErrorRate d;
  d.attitude_rate = e.angular_velocity;
  d.angular_acceleration = inertia.ldlt().solve(
      e.torque - inertia * (gains.k1 * phi1(psi, gains.p, gains.k3) + damping_term(s, e_w, gains)));
  d.torque = torque_rate - inertia * (gains.k2 * phi2(psi, gains.p, gains.k3));
  return d;
}

// ---------------------------------------------------------------------------

namespace {

// k3 lmin(Q)/lmax(P) - 1/(c k3^2 lmin(P)); c = 1 translational, 2 rotational.
double eigen_margin(const LyapunovPair& pair, double k3, double factor) {
  return k3 * pair.q_min / pair.p_max - 1.0 / (factor * k3 * k3 * pair.p_min);
}

// Gamma_t1 = min{margin, 2 kappa - 1}, Gamma_t2 = min{gamma2, 2 kappa};
// Gamma_a1 = min{margin, kappa - 1/2}, Gamma_a2 = min{gamma2, kappa}.
EsoDecay decay(const EsoGains& gains, const LyapunovPair& pair, bool rotational) {
  const double factor = rotational ? 2.0 : 1.0;
  const double kappa_scale = rotational ? 1.0 : 2.0;
  EsoDecay d;
  d.eigen_margin = eigen_margin(pair, gains.k3, factor);
  d.gamma1 = std::min(d.eigen_margin, kappa_scale * (gains.kappa - 0.5));
  d.gamma2 = std::min(gamma_constants(pair, gains.k3, gains.p).gamma2, kappa_scale * gains.kappa);
  return d;
}

EsoGainReport validate_eso(const EsoGains& gains, bool rotational) {
  EsoGainReport r;
  const DiffGains diff = gains.diff();
  r.hurwitz = diff.is_hurwitz();
  r.constraints.push_back({"hurwitz", std::min(diff.k1, diff.k2), r.hurwitz});
  const double kappa_margin = gains.kappa - 0.5;

  if (!r.hurwitz || !(gains.k3 > 0.0)) {
    r.constraints.push_back({"eigenvalue", 0.0, false});
    r.constraints.push_back({"kappa > 1/2", kappa_margin, kappa_margin > 0.0});
    return r;
  }

  LyapunovPair pair = solve_lyapunov(diff, gains.lyapunov_weight);
  EsoDecay d = decay(gains, pair, rotational);
  if (d.eigen_margin > 0.0) {
    r.constraints.push_back({"eigenvalue", d.eigen_margin, true});
  } else {
    // Q is free: look for Q = c Q0 that satisfies the inequality.
    const LyapunovPair base = pair;
    const auto c_min = detail::minimal_scale(
        [&](double c) { return decay(gains, scale_pair(base, c), rotational).eigen_margin; });
    if (c_min) {
      r.certificate_scale = 2.0 * *c_min;
      pair = scale_pair(base, *r.certificate_scale);
      d = decay(gains, pair, rotational);
      r.constraints.push_back({"eigenvalue (scaled Q)", d.eigen_margin, true});
    } else {
      r.constraints.push_back({"eigenvalue", d.eigen_margin, false});
    }
  }
  r.lyapunov = pair;
  r.gamma1 = d.gamma1;
  r.gamma2 = d.gamma2;
  r.constraints.push_back({"kappa > 1/2", kappa_margin, kappa_margin > 0.0});
  return r;
}

}  // namespace

EsoDecay translational_decay(const EsoGains& gains, const LyapunovPair& pair) {
  return decay(gains, pair, false);
}

EsoDecay rotational_decay(const EsoGains& gains, const LyapunovPair& pair) {
  return decay(gains, pair, true);
}

EsoGainReport validate_translational_gains(const EsoGains& gains) {
  return validate_eso(gains, false);
}

EsoGainReport validate_rotational_gains(const EsoGains& gains) {
  return validate_eso(gains, true);
}

double translational_eso_lyapunov(const EsoErrors& e, const EsoGains& gains,
                                  const LyapunovPair& pair, double mass) {
  const Vec3 z1 = phi1(translational_psi(e.position, e.velocity, gains), gains.p, gains.k3);
  const Vec3 z2 = e.force / mass;
  return pair.p(0, 0) * z1.squaredNorm() + 2.0 * pair.p(0, 1) * z1.dot(z2) +
         pair.p(1, 1) * z2.squaredNorm() + e.position.squaredNorm();
}

double rotational_eso_lyapunov(const EsoErrors& e, const EsoGains& gains,
                               const LyapunovPair& pair, const Mat3& inertia) {
  const Vec3 z1 =
      phi1(rotational_psi(e.attitude, e.angular_velocity, gains), gains.p, gains.k3);
  const Vec3 z2 = inertia.ldlt().solve(e.torque);
  return pair.p(0, 0) * z1.squaredNorm() + 2.0 * pair.p(0, 1) * z1.dot(z2) +
         pair.p(1, 1) * z2.squaredNorm() + morse_value(e.attitude, *gains.morse);
}

}  // namespace ffts
