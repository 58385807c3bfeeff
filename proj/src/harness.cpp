#include "ffts/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

namespace ffts {

bool GainValidation::passes() const {
  return translational.passes() && rotational.passes() && control.passes();
}

namespace {

void describe_checks(std::ostringstream& out, const char* group,
                     const std::vector<ConstraintCheck>& checks) {
  for (const auto& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << group << ": " << c.name << " (" << c.value << ")\n";
  }
}

}  // namespace

std::string GainValidation::describe() const {
  std::ostringstream out;
  out.precision(6);
  describe_checks(out, "translational observer", translational.constraints);
  if (translational.certificate_scale) {
    out << "     translational observer weight scaled by " << *translational.certificate_scale
        << "\n";
  }
  describe_checks(out, "rotational observer", rotational.constraints);
  if (rotational.certificate_scale) {
    out << "     rotational observer weight scaled by " << *rotational.certificate_scale << "\n";
  }
  describe_checks(out, "controller", control.constraints);
  if (control.translational_certificate_scale) {
    out << "     translational coupling needs Gamma_t1 > " << control.required_gamma_t1
        << " at the configured weight; satisfied with the weight scaled by "
        << *control.translational_certificate_scale << "\n";
  }
  if (control.rotational_certificate_scale) {
    out << "     attitude coupling satisfied with the weight scaled by "
        << *control.rotational_certificate_scale << "\n";
  }
  out << "Gamma_t1 " << translational.gamma1 << "  Gamma_t2 " << translational.gamma2 << "\n";
  out << "Gamma_a1 " << rotational.gamma1 << "  Gamma_a2 " << rotational.gamma2 << "\n";
  out << "Gamma_T1 " << control.gamma_t1 << "  Gamma_T2 " << control.gamma_t2 << "\n";
  out << "Gamma_A1 " << control.gamma_a1 << "  Gamma_A2 " << control.gamma_a2 << "\n";
  return out.str();
}

GainValidation validate_scenario_gains(const Scenario& sc) {
  GainValidation v;
  v.translational = validate_translational_gains(sc.translational_eso);
  v.rotational = validate_rotational_gains(sc.rotational_eso);
  v.control = validate_ctrl_gains(sc.translational_ctrl, sc.attitude_ctrl, sc.translational_eso,
                                  sc.rotational_eso, sc.vehicle.mass, sc.vehicle.inertia);
  return v;
}

// ---------------------------------------------------------------------------

namespace {

struct LoopState {
  RigidBodyState plant;
  TranslationalEsoState teso;
  RotationalEsoState reso;
  CtrlState ctrl;
};

// Euclidean layout: b v Omega | b_hat v_hat phi_hat | Omega_hat tau_hat | psi_AI
constexpr int kLoopDim = 27;
// Observer-only layout used by the variational integrator: b_hat v_hat phi_hat Omega_hat tau_hat psi_AI
constexpr int kObserverDim = 18;

LieState pack(const LoopState& s) {
  LieState x;
  x.rotations = {s.plant.attitude(), s.reso.attitude};
  x.euclid.resize(kLoopDim);
  x.euclid << s.plant.position(), s.plant.velocity, s.plant.angular_velocity, s.teso.position,
      s.teso.velocity, s.teso.force, s.reso.angular_velocity, s.reso.torque, s.ctrl.integral;
  return x;
}

LoopState unpack(const LieState& x) {
  LoopState s;
  s.plant.pose.rotation = x.rotations[0];
  s.reso.attitude = x.rotations[1];
  s.plant.pose.position = x.euclid.segment<3>(0);
  s.plant.velocity = x.euclid.segment<3>(3);
  s.plant.angular_velocity = x.euclid.segment<3>(6);
  s.teso.position = x.euclid.segment<3>(9);
  s.teso.velocity = x.euclid.segment<3>(12);
  s.teso.force = x.euclid.segment<3>(15);
  s.reso.angular_velocity = x.euclid.segment<3>(18);
  s.reso.torque = x.euclid.segment<3>(21);
  s.ctrl.integral = x.euclid.segment<3>(24);
  return s;
}

LieState pack_observers(const LoopState& s) {
  LieState x;
  x.rotations = {s.reso.attitude};
  x.euclid.resize(kObserverDim);
  x.euclid << s.teso.position, s.teso.velocity, s.teso.force, s.reso.angular_velocity,
      s.reso.torque, s.ctrl.integral;
  return x;
}

void unpack_observers(const LieState& x, LoopState& s) {
  s.reso.attitude = x.rotations[0];
  s.teso.position = x.euclid.segment<3>(0);
  s.teso.velocity = x.euclid.segment<3>(3);
  s.teso.force = x.euclid.segment<3>(6);
  s.reso.angular_velocity = x.euclid.segment<3>(9);
  s.reso.torque = x.euclid.segment<3>(12);
  s.ctrl.integral = x.euclid.segment<3>(15);
}

// Plant state between two variational-integrator samples: cubic Hermite position,
// geodesic attitude, linear velocities.
RigidBodyState interpolate(const RigidBodyState& a, const RigidBodyState& b, double theta,
                           double h) {
  const double t2 = theta * theta;
  const double t3 = t2 * theta;
  RigidBodyState s;
  s.pose.position = (2 * t3 - 3 * t2 + 1) * a.position() + (t3 - 2 * t2 + theta) * h * a.velocity +
                    (-2 * t3 + 3 * t2) * b.position() + (t3 - t2) * h * b.velocity;
  s.velocity = (1.0 - theta) * a.velocity + theta * b.velocity;
  s.pose.rotation =
      a.attitude() * exp_so3(theta * log_so3(a.attitude().transpose() * b.attitude()));
  s.angular_velocity = (1.0 - theta) * a.angular_velocity + theta * b.angular_velocity;
  return s;
}

struct ControlOutput {
  double thrust = 0.0;
  Vec3 torque = Vec3::Zero();
  Vec3 integral_rate = Vec3::Zero();
  Vec3 attitude_psi = Vec3::Zero();
  AttitudeReference reference;
};

class ClosedLoop {
 public:
  explicit ClosedLoop(const Scenario& sc) : sc_(sc) {}

  ControlOutput control(double t, const Measurement& m, const LoopState& s) const {
    const double mass = sc_.vehicle.mass;
    const TranslationalCtrlGains& tc = sc_.translational_ctrl;
    const ReferenceSample ref = reference_at(sc_.trajectory, t);
    const Vec3 b_err = m.position - ref.position;
    const Vec3 v_err = m.velocity - ref.velocity;

    Vec3 f_hat = Vec3::Zero();
    Vec3 f_hat_rate = Vec3::Zero();
    if (sc_.reject_force) {
      const EsoGains& g = sc_.translational_eso;
      f_hat = s.teso.force;
      const Vec3 psi = translational_psi(m.position - s.teso.position,
                                         m.velocity - s.teso.velocity, g);
      f_hat_rate = mass * g.k2 * phi2(psi, g.p, g.k3);
    }
    const Vec3 phi = translational_adrc_force(b_err, v_err, ref.acceleration, f_hat, tc, mass);

    // Commanded force along the predicted error trajectory, for the reference rates.
    const Vec3 accel_err = kGravity * e3() + (s.teso.force - phi) / mass - ref.acceleration;
    const ForceOffset force_at = [&](double ds) -> Vec3 {
      if (ds == 0.0) return phi;
      return translational_adrc_force(b_err + ds * v_err + 0.5 * ds * ds * accel_err,
                                      v_err + ds * accel_err,
                                      reference_at(sc_.trajectory, t + ds).acceleration,
                                      f_hat + ds * f_hat_rate, tc, mass);
    };

    // The fractional powers make the force map stiff near zero error; differencing over
    // one integration step keeps the reference rates consistent with what the plant sees.
    ControlOutput out;
    out.reference = attitude_reference(force_at, sc_.heading, sc_.step, previous_r2_);
    out.thrust = sc_.thrust_mode == ThrustMode::kProjection ? thrust_decompose(phi, m.attitude)
                                                            : phi.norm();
    const Rotation q = out.reference.attitude.transpose() * m.attitude;
    const Vec3 omega = m.angular_velocity - q.transpose() * out.reference.angular_velocity;
    const Vec3 tau_hat = sc_.reject_torque ? s.reso.torque : Vec3::Zero();
    const TorqueCommand cmd = attitude_adrc_torque(q, omega, out.reference, m.angular_velocity,
                                                   tau_hat, s.ctrl, sc_.attitude_ctrl,
                                                   sc_.vehicle.inertia);
    out.torque = cmd.torque;
    out.integral_rate = cmd.integral_rate;
    out.attitude_psi = attitude_tracking_psi(q, omega, sc_.attitude_ctrl);
    return out;
  }

  void remember_heading(const ControlOutput& c) { previous_r2_ = c.reference.attitude.col(1); }

  LieRate loop_rate(double t, const LieState& x, const NoiseDraw& draw) const {
    const LoopState s = unpack(x);
    const Measurement m = MeasurementNoise::corrupt(s.plant, draw);
    const ControlOutput c = control(t, m, s);
    const DisturbanceSample d = disturbance_at(sc_.disturbance, t);
    const RigidBodyRate pr = plant_rhs(s.plant, c.thrust, c.torque, d.force, d.torque, sc_.vehicle);
    const TranslationalEsoRate tr = translational_eso_rhs(
        s.teso, m.position, m.velocity, m.attitude, c.thrust, sc_.translational_eso,
        sc_.vehicle.mass);
    const RotationalEsoRate rr = rotational_eso_rhs(s.reso, m.attitude, m.angular_velocity,
                                                    c.torque, sc_.rotational_eso,
                                                    sc_.vehicle.inertia);
    LieRate r;
    r.body_rates = {pr.attitude_rate, rr.attitude_rate};
    r.euclid.resize(kLoopDim);
    r.euclid << pr.position_rate, pr.velocity_rate, pr.angular_acceleration, tr.position,
        tr.velocity, tr.force, rr.angular_acceleration, rr.torque_rate, c.integral_rate;
    return r;
  }

  // Observers and the integral state over one variational step with the plant
  // interpolated and the control held.
  LieRate observer_rate(double t, const LieState& x, const RigidBodyState& a,
                        const RigidBodyState& b, double t0, const NoiseDraw& draw,
                        const ControlOutput& c) const {
    const double h = sc_.step;
    LoopState s;
    unpack_observers(x, s);
    const RigidBodyState plant = interpolate(a, b, (t - t0) / h, h);
    const Measurement m = MeasurementNoise::corrupt(plant, draw);
    const TranslationalEsoRate tr = translational_eso_rhs(
        s.teso, m.position, m.velocity, m.attitude, c.thrust, sc_.translational_eso,
        sc_.vehicle.mass);
    const RotationalEsoRate rr = rotational_eso_rhs(s.reso, m.attitude, m.angular_velocity,
                                                    c.torque, sc_.rotational_eso,
                                                    sc_.vehicle.inertia);
    const AttitudeCtrlGains& ac = sc_.attitude_ctrl;
    const Vec3 integral_rate =
        -ac.l.cwiseProduct(s.ctrl.integral + scaled_power(s.ctrl.integral, ac.p.psi_power())) +
        c.attitude_psi;
    LieRate r;
    r.body_rates = {rr.attitude_rate};
    r.euclid.resize(kObserverDim);
    r.euclid << tr.position, tr.velocity, tr.force, rr.angular_acceleration, rr.torque_rate,
        integral_rate;
    return r;
  }

 private:
  const Scenario& sc_;
  std::optional<Vec3> previous_r2_;
};

bool finite_and_bounded(const LieState& x) {
  constexpr double kLimit = 1e9;
  if (!x.euclid.allFinite() || x.euclid.cwiseAbs().maxCoeff() > kLimit) return false;
  for (const auto& r : x.rotations) {
    if (!r.allFinite()) return false;
  }
  return true;
}

}  // namespace

RunRecord run_scenario(const Scenario& sc) {
  sc.validate();
  RunRecord record;
  record.name = sc.name;

  const GainValidation gains = validate_scenario_gains(sc);
  record.translational_report = gains.translational;
  record.rotational_report = gains.rotational;
  record.control_report = gains.control;
  if (!gains.passes()) {
    if (!sc.override_gain_check) {
      throw Error(ErrorCode::kGainValidationFailed, "gain constraints violated:\n" +
                                                        gains.describe());
    }
    record.warnings.push_back("gain constraints violated; running with override");
  }

  const double mass = sc.vehicle.mass;
  const Mat3& inertia = sc.vehicle.inertia;
  const bool constant_disturbance = is_constant(sc.disturbance);
  const auto& t_pair = gains.control.translational_pair;
  const auto& r_pair = gains.control.rotational_pair;

  NoiseModel noise_model = sc.noise;
  noise_model.seed = sc.seed;
  MeasurementNoise noise(noise_model);
  ClosedLoop loop(sc);

  // Observers start at the true state, including the disturbances.
  LoopState s;
  s.plant = sc.initial;
  const DisturbanceSample d0 = disturbance_at(sc.disturbance, 0.0);
  s.teso = {sc.initial.position(), sc.initial.velocity, d0.force};
  s.reso = {sc.initial.attitude(), sc.initial.angular_velocity, d0.torque};

  const double h = sc.step;
  const std::size_t n = sc.step_count();
  record.rows.reserve(n + 1);

  auto make_row = [&](double t, const LoopState& st, const ControlOutput& c) {
    RunRow row;
    row.t = t;
    const ReferenceSample ref = reference_at(sc.trajectory, t);
    const DisturbanceSample d = disturbance_at(sc.disturbance, t);
    row.position = st.plant.position();
    row.position_error = st.plant.position() - ref.position;
    row.velocity_error = st.plant.velocity - ref.velocity;
    const Rotation q = c.reference.attitude.transpose() * st.plant.attitude();
    const Vec3 omega = st.plant.angular_velocity - q.transpose() * c.reference.angular_velocity;
    row.attitude_error = principal_angle(q);
    row.angular_velocity_error = omega.norm();

    const EsoErrors e = compute_eso_errors(st.plant, st.teso, st.reso, d.force, d.torque);
    row.e_b = e.position;
    row.e_v = e.velocity;
    row.e_phi = e.force;
    row.estimator_attitude_error = principal_angle(e.attitude);
    row.e_omega = e.angular_velocity;
    row.e_tau = e.torque;
    row.thrust = c.thrust;
    row.torque = c.torque;

    row.v_t = row.v_a = std::numeric_limits<double>::quiet_NaN();
    if (constant_disturbance && t_pair) {
      const double v_t = translational_eso_lyapunov(e, sc.translational_eso, *t_pair, mass);
      row.v_t = translational_adrc_lyapunov(v_t, row.position_error, row.velocity_error,
                                            sc.translational_ctrl, mass);
    }
    if (constant_disturbance && r_pair) {
      const double v_a = rotational_eso_lyapunov(e, sc.rotational_eso, *r_pair, inertia);
      row.v_a = attitude_adrc_lyapunov(v_a, q, omega, st.ctrl, sc.attitude_ctrl, inertia);
    }
    row.rotation_defect =
        std::max(rotation_defect(st.plant.attitude()), rotation_defect(st.reso.attitude));
    return row;
  };

  auto check = [&](const LieState& x, double t) {
    if (!finite_and_bounded(x)) {
      std::ostringstream msg;
      msg << "state diverged at t = " << t << " s";
      throw Error(ErrorCode::kNumericalBlowup, msg.str());
    }
  };

  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * h;
    const NoiseDraw draw = noise.draw(h);
    const ControlOutput c0 = loop.control(t, MeasurementNoise::corrupt(s.plant, draw), s);
    record.rows.push_back(make_row(t, s, c0));
    if (k == n) break;

    if (sc.integrator == Integrator::kRk4) {
      const LieRhs rhs = [&](double tau, const LieState& x) {
        return loop.loop_rate(tau, x, draw);
      };
      const LieState x = rk4_step(rhs, t, pack(s), h);
      check(x, t + h);
      s = unpack(x);
    } else {
      const DisturbanceSample da = disturbance_at(sc.disturbance, t);
      const DisturbanceSample db = disturbance_at(sc.disturbance, t + h);
      LgviInputs in;
      in.thrust = c0.thrust;
      in.torque = c0.torque;
      in.force_disturbance = da.force;
      in.torque_disturbance = da.torque;
      in.force_disturbance_next = db.force;
      in.torque_disturbance_next = db.torque;
      const RigidBodyState next = lgvi_step(s.plant, in, sc.vehicle, h);

      const LieRhs rhs = [&](double tau, const LieState& x) {
        return loop.observer_rate(tau, x, s.plant, next, t, draw, c0);
      };
      const LieState x = rk4_step(rhs, t, pack_observers(s), h);
      unpack_observers(x, s);
      s.plant = next;
      check(pack(s), t + h);
    }
    loop.remember_heading(c0);
  }
  return record;
}

// ---------------------------------------------------------------------------

std::optional<double> settling_time(const std::vector<double>& t, const std::vector<double>& value,
                                    double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::kInvalidGains, "settling tolerance must be positive");
  if (t.size() != value.size()) {
    throw Error(ErrorCode::kInvalidGains, "time and value series differ in length");
  }
  if (t.empty()) return std::nullopt;
  std::size_t i = value.size();
  while (i > 0 && value[i - 1] < tol) --i;  // NaN compares false and stops the scan
  if (i == value.size()) return std::nullopt;
  return t[i];
}

Metrics compute_metrics(const RunRecord& record, double tracking_tol, double estimation_tol) {
  Metrics m;
  if (record.rows.empty()) return m;
  std::vector<double> t, pos, att, force, torque;
  for (const auto& r : record.rows) {
    t.push_back(r.t);
    pos.push_back(r.position_error.norm());
    att.push_back(r.attitude_error);
    force.push_back(r.e_phi.norm());
    torque.push_back(r.e_tau.norm());
  }
  m.position_settling = settling_time(t, pos, tracking_tol);
  m.attitude_settling = settling_time(t, att, tracking_tol);
  m.force_settling = settling_time(t, force, estimation_tol);
  m.torque_settling = settling_time(t, torque, estimation_tol);

  const double t_window = 0.8 * t.back();
  auto steady = [&](const std::vector<double>& v) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (t[i] >= t_window) {
        sum += v[i];
        ++count;
      }
    }
    return count ? sum / static_cast<double>(count) : 0.0;
  };
  auto peak = [](const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); };
  m.steady_position = steady(pos);
  m.steady_attitude = steady(att);
  m.steady_force = steady(force);
  m.steady_torque = steady(torque);
  m.peak_position = peak(pos);
  m.peak_attitude = peak(att);
  m.peak_force = peak(force);
  m.peak_torque = peak(torque);
  return m;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns = {
      "t",       "b_x",     "b_y",     "b_z",      "btil_x",   "btil_y",   "btil_z",
      "vtil_x",  "vtil_y",  "vtil_z",  "phi_Q",    "omega_norm", "eb_x",   "eb_y",
      "eb_z",    "ev_x",    "ev_y",    "ev_z",     "ephi_x",   "ephi_y",   "ephi_z",
      "phi_ER",  "eOmega_x", "eOmega_y", "eOmega_z", "etau_x", "etau_y",   "etau_z",
      "f",       "tau_x",   "tau_y",   "tau_z",    "V_T",      "V_A"};
  return columns;
}

namespace {

void append(std::string& line, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  if (!line.empty()) line += ',';
  line += buf;
}

void append(std::string& line, const Vec3& v) {
  for (int i = 0; i < 3; ++i) append(line, v(i));
}

void write_lines(const std::string& path, const std::string& header,
                 const std::vector<std::string>& lines) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIoFailure, "cannot open " + path + " for writing");
  f << header << '\n';
  for (const auto& l : lines) f << l << '\n';
  f.flush();
  if (!f) throw Error(ErrorCode::kIoFailure, "failed writing " + path);
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) {
    if (!out.empty()) out += ',';
    out += s;
  }
  return out;
}

}  // namespace

void write_csv(const RunRecord& record, const std::string& path) {
  std::vector<std::string> lines;
  lines.reserve(record.rows.size());
  for (const auto& r : record.rows) {
    std::string line;
    append(line, r.t);
    append(line, r.position);
    append(line, r.position_error);
    append(line, r.velocity_error);
    append(line, r.attitude_error);
    append(line, r.angular_velocity_error);
    append(line, r.e_b);
    append(line, r.e_v);
    append(line, r.e_phi);
    append(line, r.estimator_attitude_error);
    append(line, r.e_omega);
    append(line, r.e_tau);
    append(line, r.thrust);
    append(line, r.torque);
    append(line, r.v_t);
    append(line, r.v_a);
    lines.push_back(std::move(line));
  }
  write_lines(path, join(csv_columns()), lines);
}

void write_metrics_csv(const std::vector<std::pair<std::string, Metrics>>& rows,
                       const std::string& path) {
  const std::string header =
      "run,position_settling,attitude_settling,force_settling,torque_settling,"
      "steady_position,steady_attitude,steady_force,steady_torque,"
      "peak_position,peak_attitude,peak_force,peak_torque";
  std::vector<std::string> lines;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& [name, m] : rows) {
    std::string line;
    append(line, m.position_settling.value_or(nan));
    append(line, m.attitude_settling.value_or(nan));
    append(line, m.force_settling.value_or(nan));
    append(line, m.torque_settling.value_or(nan));
    append(line, m.steady_position);
    append(line, m.steady_attitude);
    append(line, m.steady_force);
    append(line, m.steady_torque);
    append(line, m.peak_position);
    append(line, m.peak_attitude);
    append(line, m.peak_force);
    append(line, m.peak_torque);
    lines.push_back(name + "," + line);
  }
  write_lines(path, header, lines);
}

// ---------------------------------------------------------------------------

namespace {

// Each run owns its state, so the suite members execute concurrently.
std::vector<SuiteRun> run_all(const std::vector<Scenario>& scenarios) {
  std::vector<std::future<SuiteRun>> pending;
  for (const auto& sc : scenarios) {
    pending.push_back(std::async(std::launch::async, [sc] {
      RunRecord rec = run_scenario(sc);
      Metrics m = compute_metrics(rec);
      return SuiteRun{sc.name, std::move(rec), m};
    }));
  }
  std::vector<SuiteRun> runs;
  for (auto& f : pending) runs.push_back(f.get());
  return runs;
}

}  // namespace

std::vector<SuiteRun> observer_suite(std::uint64_t seed) {
  std::vector<Scenario> scenarios;
  for (auto kind : {TrajectoryKind::kHover, TrajectoryKind::kSlowSwing, TrajectoryKind::kFastSwing,
                    TrajectoryKind::kHighPitch}) {
    for (bool noisy : {false, true}) {
      Scenario sc = observer_scenario(kind);
      sc.seed = seed;
      if (noisy) sc.noise = NoiseModel::observer_suite(seed);
      sc.name += noisy ? "_noisy" : "_clean";
      scenarios.push_back(std::move(sc));
    }
  }
  return run_all(scenarios);
}

std::vector<SuiteRun> adrc_suite(std::uint64_t seed) {
  struct Config {
    const char* name;
    bool force;
    bool torque;
  };
  std::vector<Scenario> scenarios;
  for (const Config& c : {Config{"none", false, false}, Config{"force", true, false},
                          Config{"torque", false, true}, Config{"both", true, true}}) {
    Scenario sc = adrc_scenario();
    sc.seed = seed;
    sc.reject_force = c.force;
    sc.reject_torque = c.torque;
    sc.name = std::string("adrc_") + c.name;
    scenarios.push_back(std::move(sc));
  }
  return run_all(scenarios);
}

void write_suite(const std::vector<SuiteRun>& runs, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + dir + ": " + ec.message());
  std::vector<std::pair<std::string, Metrics>> metrics;
  for (const auto& run : runs) {
    write_csv(run.record, (std::filesystem::path(dir) / (run.name + ".csv")).string());
    metrics.emplace_back(run.name, run.metrics);
  }
  write_metrics_csv(metrics, (std::filesystem::path(dir) / "metrics.csv").string());
}

}  // namespace ffts
