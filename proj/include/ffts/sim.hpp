#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "ffts/lie.hpp"
#include "ffts/types.hpp"

namespace ffts {

inline constexpr double kGravity = 9.81;

/// Plant state on TSE(3): attitude and position, inertial velocity, body angular velocity.
struct RigidBodyState {
  Pose pose;
  Vec3 velocity = Vec3::Zero();
  Vec3 angular_velocity = Vec3::Zero();

  const Rotation& attitude() const { return pose.rotation; }
  const Vec3& position() const { return pose.position; }
  // nu = R^T v
  Vec3 body_velocity() const { return pose.rotation.transpose() * velocity; }
};

struct VehicleParams {
  double mass = 4.34;
  Mat3 inertia = Vec3(0.0820, 0.0845, 0.1377).asDiagonal();

  /// Throws kBadInertia for a non-symmetric or indefinite inertia, kInvalidGains for m <= 0.
  void validate() const;
};

/// Time derivative of RigidBodyState; the attitude rate is the body angular velocity
/// (Rdot = R Omega^x).
struct RigidBodyRate {
  Vec3 position_rate;
  Vec3 velocity_rate;
  Vec3 attitude_rate;
  Vec3 angular_acceleration;
};

/// b' = v, m v' = m g e3 - f R e3 + phi_D, R' = R Omega^x, J Omega' = J Omega x Omega + tau + tau_D.
RigidBodyRate plant_rhs(const RigidBodyState& s, double thrust, const Vec3& torque,
                        const Vec3& force_disturbance, const Vec3& torque_disturbance,
                        const VehicleParams& params);

// ---------------------------------------------------------------------------
// Lie-group Runge-Kutta

/// A point of SO(3)^k x R^n.
struct LieState {
  std::vector<Rotation> rotations;
  VecX euclid;
};

/// Tangent at a LieState: body-frame rates per rotation and ordinary derivatives.
struct LieRate {
  std::vector<Vec3> body_rates;
  VecX euclid;
};

using LieRhs = std::function<LieRate(double t, const LieState& x)>;

/// Fourth-order Runge-Kutta-Munthe-Kaas step: rotations advance as R0 exp(theta),
/// with theta integrated through the truncated inverse dexp series.
LieState rk4_step(const LieRhs& rhs, double t, const LieState& x, double h);

LieState to_lie_state(const RigidBodyState& s);
RigidBodyState from_lie_state(const LieState& x);
LieRate to_lie_rate(const RigidBodyRate& r);

/// RK4 for the plant alone with inputs that may depend on time and state.
using PlantInputs =
    std::function<void(double t, const RigidBodyState& s, double& thrust, Vec3& torque,
                       Vec3& force_disturbance, Vec3& torque_disturbance)>;
RigidBodyState rk4_step(const PlantInputs& inputs, double t, const RigidBodyState& s,
                        const VehicleParams& params, double h);

// ---------------------------------------------------------------------------
// Lie group variational integrator

struct LgviInputs {
  double thrust = 0.0;
  Vec3 torque = Vec3::Zero();
  Vec3 force_disturbance = Vec3::Zero();
  Vec3 torque_disturbance = Vec3::Zero();
  // Disturbances at the end of the step; controls are held over the step.
  Vec3 force_disturbance_next = Vec3::Zero();
  Vec3 torque_disturbance_next = Vec3::Zero();
};

struct LgviOptions {
  double tolerance = 1e-12;
  int max_iterations = 50;
};

/// One step of the SE(3) variational integrator. The attitude increment F solves
///   h (J Omega_k)^x + h^2/2 M_k^x = F J_d - J_d F^T,  J_d = tr(J)/2 I - J
/// by Newton iteration on the Cayley parameter of F; throws kNewtonDivergence.
RigidBodyState lgvi_step(const RigidBodyState& s, const LgviInputs& in,
                         const VehicleParams& params, double h, const LgviOptions& opts = {});

/// Zero-order-hold convenience overload.
RigidBodyState lgvi_step(const RigidBodyState& s, double thrust, const Vec3& torque,
                         const Vec3& force_disturbance, const Vec3& torque_disturbance,
                         const VehicleParams& params, double h);

// ---------------------------------------------------------------------------
// Disturbances

struct ZeroDisturbance {};

/// Piecewise-constant force and torque. levels.size() == switch_times.size() + 1.
struct StepDisturbance {
  std::vector<Vec3> force_levels{Vec3::Zero()};
  std::vector<double> force_switch_times;
  std::vector<Vec3> torque_levels{Vec3::Zero()};
  std::vector<double> torque_switch_times;
};

struct SineTerm {
  Vec3 amplitude = Vec3::Zero();
  double frequency = 0.0;  // rad/s
};

/// offset + sum_j amplitude_j sin(frequency_j t), per axis.
struct SinusoidalDisturbance {
  Vec3 force_offset = Vec3::Zero();
  std::vector<SineTerm> force_terms;
  Vec3 torque_offset = Vec3::Zero();
  std::vector<SineTerm> torque_terms;
};

using DisturbanceModel = std::variant<ZeroDisturbance, StepDisturbance, SinusoidalDisturbance>;

struct DisturbanceSample {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();
};

DisturbanceSample disturbance_at(const DisturbanceModel& model, double t);

/// True when the disturbance has no switches or time-varying terms.
bool is_constant(const DisturbanceModel& model);

/// Throws kInvalidGains when switch times are not strictly increasing or sizes mismatch.
void validate(const DisturbanceModel& model);

/// Step force/torque profile used for the observer comparisons.
StepDisturbance observer_suite_disturbance();

/// Sinusoidal profile used for the closed-loop rejection runs.
SinusoidalDisturbance adrc_suite_disturbance();

// ---------------------------------------------------------------------------
// Measurement noise

struct NoiseModel {
  double psd_position = 0.0;
  double psd_velocity = 0.0;
  double psd_attitude = 0.0;
  double psd_angular_velocity = 0.0;
  std::uint64_t seed = 0;

  static NoiseModel observer_suite(std::uint64_t seed = 0);
  NoiseModel scaled(double factor) const;
};

struct Measurement {
  Vec3 position;
  Vec3 velocity;
  Rotation attitude;
  Vec3 angular_velocity;
};

/// Raw per-axis noise draws for one sample period.
struct NoiseDraw {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 attitude = Vec3::Zero();
  Vec3 angular_velocity = Vec3::Zero();
};

/// Band-limited white noise: per-sample variance PSD / h, deterministic per seed.
class MeasurementNoise {
 public:
  explicit MeasurementNoise(const NoiseModel& model);

  NoiseDraw draw(double h);
  Measurement apply(const RigidBodyState& s, double h) { return corrupt(s, draw(h)); }

  static Measurement corrupt(const RigidBodyState& s, const NoiseDraw& d);

 private:
  NoiseModel model_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

Measurement apply_noise(const RigidBodyState& s, MeasurementNoise& noise, double h);

// ---------------------------------------------------------------------------
// Reference trajectories

enum class TrajectoryKind { kHover, kSlowSwing, kFastSwing, kHighPitch, kLgviTrack };

struct TrajectoryRef {
  TrajectoryKind kind = TrajectoryKind::kHover;
};

struct ReferenceSample {
  Vec3 position;
  Vec3 velocity;
  Vec3 acceleration;
};

ReferenceSample reference_at(const TrajectoryRef& traj, double t);

const char* to_string(TrajectoryKind kind);
TrajectoryKind trajectory_from_string(const std::string& name);

}  // namespace ffts
