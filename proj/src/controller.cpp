#include "ffts/controller.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "gain_search.hpp"

namespace ffts {

namespace {

void require_finite_nonneg(std::initializer_list<double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) throw Error(ErrorCode::kInvalidGains, what);
  }
}

}  // namespace

void TranslationalCtrlGains::check() const {
  require_finite_nonneg({k_td, k_tp, kappa, l.x(), l.y(), l.z()},
                        "translational gains must be finite and non-negative");
}

void AttitudeCtrlGains::check() const {
  require_finite_nonneg({k_ad, k_ap, k_ai, kappa, l.x(), l.y(), l.z()},
                        "attitude gains must be finite and non-negative");
}

Vec3 translational_tracking_psi(const Vec3& b_err, const Vec3& v_err,
                                const TranslationalCtrlGains& g) {
  return v_err + g.kappa * (b_err + scaled_power(b_err, g.p.psi_power()));
}

Vec3 translational_adrc_force(const Vec3& b_err, const Vec3& v_err, const Vec3& accel_ref,
                              const Vec3& force_estimate, const TranslationalCtrlGains& gains,
                              double mass) {
  gains.check();
  const double beta = gains.p.psi_power();
  const Vec3 psi = translational_tracking_psi(b_err, v_err, gains);

  Vec3 damping = v_err;
  if (b_err.squaredNorm() >= detail::kPowerFloor * detail::kPowerFloor) {
    damping += std::pow(b_err.squaredNorm(), beta) * (h_matrix(b_err, gains.p.h_gain()) * v_err);
  }
  return mass * kGravity * e3() +
         gains.k_td * gains.l.cwiseProduct(psi + scaled_power(psi, beta)) +
         gains.k_tp * gains.l.cwiseProduct(b_err) + mass * gains.kappa * damping -
         mass * accel_ref + force_estimate;
}

Rotation attitude_from_force(const Vec3& force, const Vec3& heading,
                             const std::optional<Vec3>& previous_r2) {
  const double norm = force.norm();
  if (!(norm > kMinThrust)) {
    throw Error(ErrorCode::kDegenerateThrust, "commanded force is too small to define an attitude");
  }
  const Vec3 r3 = force / norm;
  Vec3 r2 = r3.cross(heading);
  if (r2.norm() <= kHeadingTolerance) {
    if (!previous_r2) {
      throw Error(ErrorCode::kDegenerateHeading, "heading is parallel to the thrust axis");
    }
    r2 = *previous_r2 - previous_r2->dot(r3) * r3;
    if (r2.norm() <= kHeadingTolerance) {
      throw Error(ErrorCode::kDegenerateHeading, "previous heading is parallel to the thrust axis");
    }
  }
  r2.normalize();
  Rotation r;
  r.col(0) = r2.cross(r3);
  r.col(1) = r2;
  r.col(2) = r3;
  return r;
}

AttitudeReference attitude_reference(const ForceOffset& force_at, const Vec3& heading,
                                     double delta, const std::optional<Vec3>& previous_r2) {
  const Rotation r0 = attitude_from_force(force_at(0.0), heading, previous_r2);
  const std::optional<Vec3> r2 = r0.col(1).eval();
  auto at = [&](double s) { return attitude_from_force(force_at(s), heading, r2); };
  const Rotation rm2 = at(-2.0 * delta);
  const Rotation rm1 = at(-delta);
  const Rotation rp1 = at(delta);
  const Rotation rp2 = at(2.0 * delta);

  const Mat3 rdot = (rm2 - 8.0 * rm1 + 8.0 * rp1 - rp2) / (12.0 * delta);
  const Mat3 rddot = (-rm2 + 16.0 * rm1 - 30.0 * r0 + 16.0 * rp1 - rp2) / (12.0 * delta * delta);

  AttitudeReference ref;
  ref.attitude = r0;
  ref.angular_velocity = vee_skew_part(r0.transpose() * rdot);
  // R^T R'' = Omega'^x + (Omega^x)^2 and the second term is symmetric.
  ref.angular_acceleration = vee_skew_part(r0.transpose() * rddot);
  return ref;
}

AttitudeReference attitude_reference(const Vec3& force, const Vec3& heading) {
  AttitudeReference ref;
  ref.attitude = attitude_from_force(force, heading);
  return ref;
}

Vec3 attitude_tracking_psi(const Rotation& q, const Vec3& omega, const AttitudeCtrlGains& g) {
  const Vec3 s = morse_sk(q, g.morse);
  return omega + g.kappa * (s + scaled_power(s, g.p.psi_power()));
}

TorqueCommand attitude_adrc_torque(const Rotation& q, const Vec3& omega,
                                   const AttitudeReference& ref, const Vec3& body_rate,
                                   const Vec3& torque_estimate, const CtrlState& ctrl,
                                   const AttitudeCtrlGains& gains, const Mat3& inertia) {
  gains.check();
  const double beta = gains.p.psi_power();
  const Vec3 s = morse_sk(q, gains.morse);
  const Vec3 w = morse_rate(q, omega, gains.morse);
  const Vec3 psi = omega + gains.kappa * (s + scaled_power(s, beta));

  Vec3 damping = w;
  if (s.squaredNorm() >= detail::kPowerFloor * detail::kPowerFloor) {
    damping += std::pow(s.squaredNorm(), beta) * (h_matrix(s, gains.p.h_gain()) * w);
  }
  // Feed-forward cancels J(omega^x Q^T Omega_d - Q^T Omega_d') in the error dynamics.
  const Vec3 qt_wd = q.transpose() * ref.angular_velocity;
  const Vec3 feedforward =
      inertia * (q.transpose() * ref.angular_acceleration - omega.cross(qt_wd));

  TorqueCommand out;
  out.torque = -gains.k_ad * gains.l.cwiseProduct(psi + scaled_power(psi, beta)) -
               gains.k_ap * s - gains.k_ai * ctrl.integral + feedforward -
               (inertia * body_rate).cross(body_rate) - torque_estimate -
               gains.kappa * (inertia * damping);
  out.integral_rate = -gains.l.cwiseProduct(ctrl.integral + scaled_power(ctrl.integral, beta)) +
                      psi;
  return out;
}

double thrust_decompose(const Vec3& force, const Rotation& r) { return force.dot(r * e3()); }

// ---------------------------------------------------------------------------

bool CtrlGainReport::passes() const {
  return std::all_of(constraints.begin(), constraints.end(),
                     [](const ConstraintCheck& c) { return c.passed; });
}

namespace {

struct Coupling {
  std::optional<LyapunovPair> pair;
  std::optional<double> scale;
  double margin = 0.0;
  EsoDecay decay;
};

// Evaluates margin(pair) at the configured weight and, on failure, at a scaled weight.
template <typename DecayFn, typename MarginFn>
Coupling couple(const EsoGains& eso, DecayFn&& decay_fn, MarginFn&& margin_fn) {
  Coupling c;
  if (!eso.diff().is_hurwitz() || !(eso.k3 > 0.0)) {
    c.margin = -1.0;
    return c;
  }
  const LyapunovPair base = solve_lyapunov(eso.diff(), eso.lyapunov_weight);
  auto margin_at = [&](double s) {
    const LyapunovPair pair = scale_pair(base, s);
    return margin_fn(decay_fn(eso, pair), pair);
  };
  double s = 1.0;
  if (!(margin_at(1.0) > 0.0)) {
    if (const auto s_min = detail::minimal_scale(margin_at)) {
      s = 2.0 * *s_min;
      c.scale = s;
    }
  }
  c.pair = scale_pair(base, s);
  c.decay = decay_fn(eso, *c.pair);
  c.margin = margin_fn(c.decay, *c.pair);
  return c;
}

}  // namespace

CtrlGainReport validate_ctrl_gains(const TranslationalCtrlGains& t_gains,
                                   const AttitudeCtrlGains& a_gains,
                                   const EsoGains& t_eso, const EsoGains& a_eso, double mass,
                                   const Mat3& inertia) {
  CtrlGainReport r;
  const double p = t_gains.p.value();
  const double lt = t_gains.l.minCoeff();
  const double la = a_gains.l.minCoeff();
  const double j_max = Eigen::SelfAdjointEigenSolver<Mat3>(inertia).eigenvalues().maxCoeff();

  r.constraints.push_back({"L_T positive definite", lt, lt > 0.0});
  r.constraints.push_back({"L_A positive definite", la, la > 0.0});
  for (double g : {t_gains.k_tp, t_gains.kappa, a_gains.k_ap, a_gains.k_ai, a_gains.kappa}) {
    if (!(g > 0.0)) {
      r.constraints.push_back({"positive scalar gains", g, false});
      break;
    }
  }

  const double t1 = t_gains.k_td * lt - 0.5;
  r.constraints.push_back({"k_TD lmin(L_T) > 1/2", t1, t1 > 0.0});

  // Gamma_t1 - m^2 / (2 lmin(P_t)) > 0
  auto t_margin = [&](const EsoDecay& d, const LyapunovPair& pair) {
    return d.gamma1 - mass * mass / (2.0 * pair.p_min);
  };
  const Coupling tc = couple(t_eso, translational_decay, t_margin);
  r.constraints.push_back({tc.scale ? "translational coupling (scaled Q_t)"
                                    : "translational coupling",
                           tc.margin, tc.margin > 0.0});
  r.translational_pair = tc.pair;
  r.translational_certificate_scale = tc.scale;
  if (t_eso.diff().is_hurwitz()) {
    r.required_gamma_t1 =
        mass * mass / (2.0 * solve_lyapunov(t_eso.diff(), t_eso.lyapunov_weight).p_min);
  }

  const double a1 = 2.0 * a_gains.k_ad * la - 1.0;
  r.constraints.push_back({"2 k_AD lmin(L_A) - 1 > 0", a1, a1 > 0.0});

  // Gamma_a1 - 1 / (2 lmin(J^-2) lmin(P_a)) > 0, lmin(J^-2) = 1 / lmax(J)^2
  auto a_margin = [&](const EsoDecay& d, const LyapunovPair& pair) {
    return d.gamma1 - j_max * j_max / (2.0 * pair.p_min);
  };
  const Coupling ac = couple(a_eso, rotational_decay, a_margin);
  r.constraints.push_back({ac.scale ? "attitude coupling (scaled Q_a)" : "attitude coupling",
                           ac.margin, ac.margin > 0.0});
  r.rotational_pair = ac.pair;
  r.rotational_certificate_scale = ac.scale;

  const double root2 = std::pow(2.0, 1.0 / p);
  const double q = (p - 1.0) / p;
  r.gamma_t1 = std::min({(2.0 * t_gains.k_td * lt - 1.0) / mass, 2.0 * t_gains.kappa, tc.margin});
  r.gamma_t2 = std::min({root2 * t_gains.k_td * lt * std::pow(mass, -1.0 / p),
                         root2 * t_gains.kappa * std::pow(t_gains.k_tp, q), tc.decay.gamma2});
  r.gamma_a1 = std::min(
      {ac.margin, 2.0 * (a_gains.k_ad * la - 0.5) / j_max, a_gains.kappa, 2.0 * la});
  r.gamma_a2 = std::min({ac.decay.gamma2, root2 * a_gains.k_ad * la * std::pow(j_max, -1.0 / p),
                         a_gains.kappa * std::pow(a_gains.k_ap, q),
                         root2 * std::pow(a_gains.k_ai, q) * la});
  return r;
}

// ---------------------------------------------------------------------------

double translational_adrc_lyapunov(double v_t, const Vec3& b_err, const Vec3& v_err,
                                   const TranslationalCtrlGains& gains, double mass) {
  const Vec3 psi = translational_tracking_psi(b_err, v_err, gains);
  return v_t + 0.5 * mass * psi.squaredNorm() + 0.5 * gains.k_tp * b_err.squaredNorm();
}

double attitude_adrc_lyapunov(double v_a, const Rotation& q, const Vec3& omega,
                              const CtrlState& ctrl, const AttitudeCtrlGains& gains,
                              const Mat3& inertia) {
  const Vec3 psi = attitude_tracking_psi(q, omega, gains);
  return v_a + 0.5 * psi.dot(inertia * psi) + gains.k_ap * morse_value(q, gains.morse) +
         0.5 * gains.k_ai * ctrl.integral.squaredNorm();
}

}  // namespace ffts
