#include "ffts/sim.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace ffts {

void VehicleParams::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw Error(ErrorCode::kInvalidGains, "mass must be positive");
  }
  if ((inertia - inertia.transpose()).norm() > 1e-12 * std::max(1.0, inertia.norm())) {
    throw Error(ErrorCode::kBadInertia, "inertia must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat3> es(inertia);
  if (!(es.eigenvalues().minCoeff() > 0.0)) {
    throw Error(ErrorCode::kBadInertia, "inertia must be positive definite");
  }
}

RigidBodyRate plant_rhs(const RigidBodyState& s, double thrust, const Vec3& torque,
                        const Vec3& force_disturbance, const Vec3& torque_disturbance,
                        const VehicleParams& params) {
  const Mat3& j = params.inertia;
  const Vec3& omega = s.angular_velocity;
  RigidBodyRate r;
  r.position_rate = s.velocity;
  r.velocity_rate = kGravity * e3() +
                    (force_disturbance - thrust * (s.attitude() * e3())) / params.mass;
  r.attitude_rate = omega;
  r.angular_acceleration =
      j.ldlt().solve((j * omega).cross(omega) + torque + torque_disturbance);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

// Right-trivialised inverse dexp, truncated after the second-order term.
Vec3 dexp_inv(const Vec3& theta, const Vec3& w) {
  const Vec3 tw = theta.cross(w);
  return w + 0.5 * tw + theta.cross(tw) / 12.0;
}

LieState advance(const LieState& x0, const std::vector<Vec3>& thetas, const VecX& dx) {
  LieState x;
  x.rotations.resize(x0.rotations.size());
  for (std::size_t i = 0; i < x0.rotations.size(); ++i) {
    x.rotations[i] = x0.rotations[i] * exp_so3(thetas[i]);
  }
  x.euclid = x0.euclid + dx;
  return x;
}

std::vector<Vec3> scaled(const std::vector<Vec3>& v, double a) {
  std::vector<Vec3> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = a * v[i];
  return out;
}

}  // namespace

LieState rk4_step(const LieRhs& rhs, double t, const LieState& x, double h) {
  const std::size_t nr = x.rotations.size();

  const LieRate k1 = rhs(t, x);
  const std::vector<Vec3>& u1 = k1.body_rates;

  const std::vector<Vec3> th2 = scaled(u1, 0.5 * h);
  const LieRate k2 = rhs(t + 0.5 * h, advance(x, th2, 0.5 * h * k1.euclid));
  std::vector<Vec3> u2(nr);
  for (std::size_t i = 0; i < nr; ++i) u2[i] = dexp_inv(th2[i], k2.body_rates[i]);

  const std::vector<Vec3> th3 = scaled(u2, 0.5 * h);
  const LieRate k3 = rhs(t + 0.5 * h, advance(x, th3, 0.5 * h * k2.euclid));
  std::vector<Vec3> u3(nr);
  for (std::size_t i = 0; i < nr; ++i) u3[i] = dexp_inv(th3[i], k3.body_rates[i]);

  const std::vector<Vec3> th4 = scaled(u3, h);
  const LieRate k4 = rhs(t + h, advance(x, th4, h * k3.euclid));
  std::vector<Vec3> u4(nr);
  for (std::size_t i = 0; i < nr; ++i) u4[i] = dexp_inv(th4[i], k4.body_rates[i]);

  std::vector<Vec3> theta(nr);
  for (std::size_t i = 0; i < nr; ++i) {
    theta[i] = (h / 6.0) * (u1[i] + 2.0 * u2[i] + 2.0 * u3[i] + u4[i]);
  }
  LieState out = advance(
      x, theta, (h / 6.0) * (k1.euclid + 2.0 * k2.euclid + 2.0 * k3.euclid + k4.euclid));
  for (auto& r : out.rotations) r = reorthonormalize(r);
  return out;
}

LieState to_lie_state(const RigidBodyState& s) {
  LieState x;
  x.rotations = {s.attitude()};
  x.euclid.resize(9);
  x.euclid << s.position(), s.velocity, s.angular_velocity;
  return x;
}

RigidBodyState from_lie_state(const LieState& x) {
  RigidBodyState s;
  s.pose.rotation = x.rotations.at(0);
  s.pose.position = x.euclid.segment<3>(0);
  s.velocity = x.euclid.segment<3>(3);
  s.angular_velocity = x.euclid.segment<3>(6);
  return s;
}

LieRate to_lie_rate(const RigidBodyRate& r) {
  LieRate d;
  d.body_rates = {r.attitude_rate};
  d.euclid.resize(9);
  d.euclid << r.position_rate, r.velocity_rate, r.angular_acceleration;
  return d;
}

RigidBodyState rk4_step(const PlantInputs& inputs, double t, const RigidBodyState& s,
                        const VehicleParams& params, double h) {
  const LieRhs rhs = [&](double tau, const LieState& x) {
    const RigidBodyState st = from_lie_state(x);
    double f = 0.0;
    Vec3 m = Vec3::Zero();
    Vec3 fd = Vec3::Zero();
    Vec3 md = Vec3::Zero();
    inputs(tau, st, f, m, fd, md);
    return to_lie_rate(plant_rhs(st, f, m, fd, md, params));
  };
  return from_lie_state(rk4_step(rhs, t, to_lie_state(s), h));
}

// ---------------------------------------------------------------------------

namespace {

Rotation cayley(const Vec3& f) {
  const Mat3 fh = hat(f);
  return (Mat3::Identity() + fh) * (Mat3::Identity() - fh).inverse();
}

// Solves g + g x f + (g.f) f - 2 J f = 0, the Cayley form of
// g^x = F J_d - J_d F^T with F = cay(f).
Rotation solve_attitude_increment(const Vec3& g, const Mat3& j, const LgviOptions& opts) {
  Vec3 f = (2.0 * j).ldlt().solve(g);
  for (int it = 0; it < opts.max_iterations; ++it) {
    const Vec3 res = g + g.cross(f) + g.dot(f) * f - 2.0 * j * f;
    const Mat3 jac = hat(g) + g.dot(f) * Mat3::Identity() + f * g.transpose() - 2.0 * j;
    const Vec3 step = jac.partialPivLu().solve(res);
    f -= step;
    if (!f.allFinite()) break;
    if (step.norm() <= opts.tolerance) return cayley(f);
  }
  throw Error(ErrorCode::kNewtonDivergence, "LGVI attitude update did not converge");
}

}  // namespace

RigidBodyState lgvi_step(const RigidBodyState& s, const LgviInputs& in,
                         const VehicleParams& params, double h, const LgviOptions& opts) {
  const Mat3& j = params.inertia;
  const double m = params.mass;
  const Vec3 moment = in.torque + in.torque_disturbance;
  const Vec3 moment_next = in.torque + in.torque_disturbance_next;

  const Vec3 j_omega = j * s.angular_velocity;
  const Rotation f = solve_attitude_increment(h * j_omega + 0.5 * h * h * moment, j, opts);

  RigidBodyState out;
  out.pose.rotation = reorthonormalize(s.attitude() * f);
  const Vec3 j_omega_next =
      f.transpose() * j_omega + 0.5 * h * f.transpose() * moment + 0.5 * h * moment_next;
  out.angular_velocity = j.ldlt().solve(j_omega_next);

  const Vec3 force = m * kGravity * e3() - in.thrust * (s.attitude() * e3()) +
                     in.force_disturbance;
  const Vec3 force_next = m * kGravity * e3() - in.thrust * (out.attitude() * e3()) +
                          in.force_disturbance_next;
  out.pose.position = s.position() + h * s.velocity + (0.5 * h * h / m) * force;
  out.velocity = s.velocity + (0.5 * h / m) * (force + force_next);
  return out;
}

RigidBodyState lgvi_step(const RigidBodyState& s, double thrust, const Vec3& torque,
                         const Vec3& force_disturbance, const Vec3& torque_disturbance,
                         const VehicleParams& params, double h) {
  LgviInputs in;
  in.thrust = thrust;
  in.torque = torque;
  in.force_disturbance = in.force_disturbance_next = force_disturbance;
  in.torque_disturbance = in.torque_disturbance_next = torque_disturbance;
  return lgvi_step(s, in, params, h);
}

// ---------------------------------------------------------------------------

namespace {

Vec3 piecewise(const std::vector<Vec3>& levels, const std::vector<double>& switches, double t) {
  std::size_t i = 0;
  while (i < switches.size() && t >= switches[i]) ++i;
  return levels.at(i);
}

Vec3 sine_sum(const Vec3& offset, const std::vector<SineTerm>& terms, double t) {
  Vec3 v = offset;
  for (const auto& term : terms) v += term.amplitude * std::sin(term.frequency * t);
  return v;
}

void check_levels(const std::vector<Vec3>& levels, const std::vector<double>& switches) {
  if (levels.size() != switches.size() + 1) {
    throw Error(ErrorCode::kInvalidGains, "step disturbance needs one more level than switches");
  }
  for (std::size_t i = 1; i < switches.size(); ++i) {
    if (!(switches[i] > switches[i - 1])) {
      throw Error(ErrorCode::kInvalidGains, "switch times must be strictly increasing");
    }
  }
}

}  // namespace

DisturbanceSample disturbance_at(const DisturbanceModel& model, double t) {
  DisturbanceSample out;
  if (const auto* step = std::get_if<StepDisturbance>(&model)) {
    out.force = piecewise(step->force_levels, step->force_switch_times, t);
    out.torque = piecewise(step->torque_levels, step->torque_switch_times, t);
  } else if (const auto* sine = std::get_if<SinusoidalDisturbance>(&model)) {
    out.force = sine_sum(sine->force_offset, sine->force_terms, t);
    out.torque = sine_sum(sine->torque_offset, sine->torque_terms, t);
  }
  return out;
}

bool is_constant(const DisturbanceModel& model) {
  if (const auto* step = std::get_if<StepDisturbance>(&model)) {
    return step->force_switch_times.empty() && step->torque_switch_times.empty();
  }
  if (const auto* sine = std::get_if<SinusoidalDisturbance>(&model)) {
    for (const auto& term : sine->force_terms) {
      if (term.amplitude.norm() > 0.0 && term.frequency != 0.0) return false;
    }
    for (const auto& term : sine->torque_terms) {
      if (term.amplitude.norm() > 0.0 && term.frequency != 0.0) return false;
    }
  }
  return true;
}

void validate(const DisturbanceModel& model) {
  if (const auto* step = std::get_if<StepDisturbance>(&model)) {
    check_levels(step->force_levels, step->force_switch_times);
    check_levels(step->torque_levels, step->torque_switch_times);
  }
}

StepDisturbance observer_suite_disturbance() {
  StepDisturbance d;
  d.force_levels = {Vec3(5.0, 2.0, 0.0), Vec3(9.0, 5.0, 0.0)};
  d.force_switch_times = {10.0};
  d.torque_levels = {Vec3(2.0, 0.0, 1.0), Vec3(4.0, 0.0, 1.0)};
  d.torque_switch_times = {15.0};
  return d;
}

SinusoidalDisturbance adrc_suite_disturbance() {
  const double slow = 0.5 * M_PI;
  const double fast = M_PI;
  SinusoidalDisturbance d;
  d.force_offset = Vec3(50.0, 50.0, 20.0);
  d.force_terms = {{Vec3(6.0, 3.0, 0.0), slow}, {Vec3(0.5, 0.2, 0.0), fast}};
  d.torque_offset = Vec3(5.0, 3.0, -3.0);
  d.torque_terms = {{Vec3(0.5, 1.0, 0.0), slow}, {Vec3(0.1, 0.05, 0.0), fast}};
  return d;
}

// ---------------------------------------------------------------------------

NoiseModel NoiseModel::observer_suite(std::uint64_t seed) {
  NoiseModel n;
  n.psd_position = 3e-8;
  n.psd_velocity = 3e-7;
  n.psd_attitude = 3e-8;
  n.psd_angular_velocity = 3e-7;
  n.seed = seed;
  return n;
}

NoiseModel NoiseModel::scaled(double factor) const {
  NoiseModel n = *this;
  n.psd_position *= factor;
  n.psd_velocity *= factor;
  n.psd_attitude *= factor;
  n.psd_angular_velocity *= factor;
  return n;
}

MeasurementNoise::MeasurementNoise(const NoiseModel& model) : model_(model), rng_(model.seed) {
  if (model.psd_position < 0.0 || model.psd_velocity < 0.0 || model.psd_attitude < 0.0 ||
      model.psd_angular_velocity < 0.0) {
    throw Error(ErrorCode::kInvalidGains, "noise PSD must be non-negative");
  }
}

NoiseDraw MeasurementNoise::draw(double h) {
  // Every channel draws on every call so the stream does not depend on which PSDs are zero.
  auto channel = [&](double psd) {
    const double sigma = std::sqrt(psd / h);
    Vec3 v;
    for (int i = 0; i < 3; ++i) v(i) = sigma * normal_(rng_);
    return v;
  };
  NoiseDraw d;
  d.position = channel(model_.psd_position);
  d.velocity = channel(model_.psd_velocity);
  d.attitude = channel(model_.psd_attitude);
  d.angular_velocity = channel(model_.psd_angular_velocity);
  return d;
}

Measurement MeasurementNoise::corrupt(const RigidBodyState& s, const NoiseDraw& d) {
  Measurement m;
  m.position = s.position() + d.position;
  m.velocity = s.velocity + d.velocity;
  m.attitude = d.attitude.isZero(0.0) ? s.attitude() : Rotation(s.attitude() * exp_so3(d.attitude));
  m.angular_velocity = s.angular_velocity + d.angular_velocity;
  return m;
}

Measurement apply_noise(const RigidBodyState& s, MeasurementNoise& noise, double h) {
  return noise.apply(s, h);
}

// ---------------------------------------------------------------------------

ReferenceSample reference_at(const TrajectoryRef& traj, double t) {
  ReferenceSample r;
  r.position = Vec3(0.0, 0.0, -3.0);
  r.velocity.setZero();
  r.acceleration.setZero();

  // a sin(w t) along one axis
  auto swing = [&](int axis, double a, double w) {
    r.position(axis) = a * std::sin(w * t);
    r.velocity(axis) = a * w * std::cos(w * t);
    r.acceleration(axis) = -a * w * w * std::sin(w * t);
  };

  switch (traj.kind) {
    case TrajectoryKind::kHover:
      break;
    case TrajectoryKind::kSlowSwing:
      swing(0, 10.0, 0.1 * M_PI);
      break;
    case TrajectoryKind::kFastSwing:
      swing(0, 5.0, 0.5 * M_PI);
      break;
    case TrajectoryKind::kHighPitch: {
      const double w = 0.5 * M_PI;
      swing(0, 10.0, w);
      r.position(1) = 10.0 * std::cos(w * t);
      r.velocity(1) = -10.0 * w * std::sin(w * t);
      r.acceleration(1) = -10.0 * w * w * std::cos(w * t);
      break;
    }
    case TrajectoryKind::kLgviTrack:
      swing(0, 2.0, M_PI);
      swing(2, 2.0, M_PI);
      r.position(1) = 2.0 * t;
      r.velocity(1) = 2.0;
      r.acceleration(1) = 0.0;
      break;
  }
  return r;
}

const char* to_string(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::kHover: return "hover";
    case TrajectoryKind::kSlowSwing: return "slow_swing";
    case TrajectoryKind::kFastSwing: return "fast_swing";
    case TrajectoryKind::kHighPitch: return "high_pitch";
    case TrajectoryKind::kLgviTrack: return "lgvi_track";
  }
  return "unknown";
}

TrajectoryKind trajectory_from_string(const std::string& name) {
  for (auto k : {TrajectoryKind::kHover, TrajectoryKind::kSlowSwing, TrajectoryKind::kFastSwing,
                 TrajectoryKind::kHighPitch, TrajectoryKind::kLgviTrack}) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorCode::kParseError, "unknown trajectory '" + name + "'");
}

}  // namespace ffts
