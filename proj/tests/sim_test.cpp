#include <gtest/gtest.h>

#include <cmath>

#include "ffts/sim.hpp"

using namespace ffts;

namespace {

const VehicleParams kVehicle;

RigidBodyState tumbling() {
  RigidBodyState s;
  s.angular_velocity = Vec3(1.2, -0.7, 2.5);
  s.velocity = Vec3(0.3, 0.1, -0.2);
  return s;
}

PlantInputs free_body() {
  return [](double, const RigidBodyState&, double& f, Vec3& tau, Vec3& fd, Vec3& td) {
    f = 0.0;
    tau = fd = td = Vec3::Zero();
  };
}

RigidBodyState run_rk4(RigidBodyState s, const PlantInputs& in, double h, double t_end) {
  const int n = static_cast<int>(std::lround(t_end / h));
  for (int k = 0; k < n; ++k) s = rk4_step(in, k * h, s, kVehicle, h);
  return s;
}

double state_distance(const RigidBodyState& a, const RigidBodyState& b) {
  return (a.attitude() - b.attitude()).norm() + (a.position() - b.position()).norm() +
         (a.velocity - b.velocity).norm() + (a.angular_velocity - b.angular_velocity).norm();
}

double rotational_energy(const RigidBodyState& s) {
  return 0.5 * s.angular_velocity.dot(kVehicle.inertia * s.angular_velocity);
}

}  // namespace

TEST(PlantRhs, HoverIsEquilibrium) {
  const RigidBodyRate r =
      plant_rhs(RigidBodyState{}, kVehicle.mass * kGravity, Vec3::Zero(), Vec3::Zero(),
                Vec3::Zero(), kVehicle);
  EXPECT_TRUE(r.position_rate.isZero());
  EXPECT_LT(r.velocity_rate.norm(), 1e-15);
  EXPECT_TRUE(r.attitude_rate.isZero());
  EXPECT_TRUE(r.angular_acceleration.isZero());
}

TEST(PlantRhs, FreeFallAndDisturbance) {
  const RigidBodyRate r =
      plant_rhs(RigidBodyState{}, 0.0, Vec3::Zero(), Vec3(4.34, 0, 0), Vec3::Zero(), kVehicle);
  EXPECT_LT((r.velocity_rate - Vec3(1.0, 0, kGravity)).norm(), 1e-15);
}

TEST(PlantRhs, PrincipalAxisSpinHasNoGyroscopicTerm) {
  RigidBodyState s;
  s.angular_velocity = Vec3(1, 0, 0);
  EXPECT_TRUE(plant_rhs(s, 0, Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), kVehicle)
                  .angular_acceleration.isZero());
  // Off-axis: J Omega' = (J Omega) x Omega.
  s.angular_velocity = Vec3(1, 2, 3);
  const Mat3& j = kVehicle.inertia;
  const Vec3 w = s.angular_velocity;
  const Vec3 jw(j(0, 0) * w(0), j(1, 1) * w(1), j(2, 2) * w(2));
  const Vec3 expected(
      (jw(1) * w(2) - jw(2) * w(1)) / j(0, 0), (jw(2) * w(0) - jw(0) * w(2)) / j(1, 1),
      (jw(0) * w(1) - jw(1) * w(0)) / j(2, 2));
  const Vec3 got =
      plant_rhs(s, 0, Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), kVehicle).angular_acceleration;
  EXPECT_LT((got - expected).norm(), 1e-12);
}

TEST(VehicleParams, Validation) {
  VehicleParams v;
  EXPECT_NO_THROW(v.validate());
  v.inertia(0, 1) = 0.01;
  EXPECT_THROW(v.validate(), Error);
  v = VehicleParams{};
  v.mass = 0.0;
  EXPECT_THROW(v.validate(), Error);
}

TEST(Rk4, PureRotationMatchesClosedForm) {
  RigidBodyState s;
  s.angular_velocity = Vec3(0, 0, 1.3);
  const RigidBodyState out = run_rk4(s, free_body(), 1e-3, 1.0);
  Rotation rz;
  rz << std::cos(1.3), -std::sin(1.3), 0, std::sin(1.3), std::cos(1.3), 0, 0, 0, 1;
  EXPECT_LT((out.attitude() - rz).norm(), 1e-10);
}

TEST(Rk4, OrthogonalityOverLongRun) {
  const RigidBodyState out = run_rk4(tumbling(), free_body(), 1e-3, 25.0);
  EXPECT_LT((out.attitude().transpose() * out.attitude() - Mat3::Identity()).norm(), 1e-12);
}

TEST(Rk4, FourthOrderConvergence) {
  const RigidBodyState ref = run_rk4(tumbling(), free_body(), 1e-3 / 16, 1.0);
  const double e1 = state_distance(run_rk4(tumbling(), free_body(), 0.02, 1.0), ref);
  const double e2 = state_distance(run_rk4(tumbling(), free_body(), 0.01, 1.0), ref);
  EXPECT_GT(e1 / e2, 12.0);
  EXPECT_LT(e1 / e2, 20.0);
}

TEST(Rk4, ConservesRotationalEnergy) {
  const RigidBodyState s0 = tumbling();
  const RigidBodyState out = run_rk4(s0, free_body(), 1e-3, 5.0);
  EXPECT_LT(std::abs(rotational_energy(out) - rotational_energy(s0)), 1e-8);
}

TEST(Rk4, GenericStepCarriesSeveralRotations) {
  // Two independent spins about fixed axes.
  const LieRhs rhs = [](double, const LieState&) {
    LieRate r;
    r.body_rates = {Vec3(0, 0, 1), Vec3(2, 0, 0)};
    r.euclid = VecX::Ones(1);
    return r;
  };
  LieState x{{Rotation::Identity(), Rotation::Identity()}, VecX::Zero(1)};
  for (int k = 0; k < 100; ++k) x = rk4_step(rhs, k * 0.01, x, 0.01);
  EXPECT_LT((x.rotations[0] - exp_so3(Vec3(0, 0, 1))).norm(), 1e-12);
  EXPECT_LT((x.rotations[1] - exp_so3(Vec3(2, 0, 0))).norm(), 1e-12);
  EXPECT_NEAR(x.euclid(0), 1.0, 1e-12);
}

TEST(Lgvi, TorqueFreeMomentumConservation) {
  RigidBodyState s = tumbling();
  const double h = 5e-3;
  const Vec3 pi0 = s.attitude() * (kVehicle.inertia * s.angular_velocity);
  const double norm0 = (kVehicle.inertia * s.angular_velocity).norm();
  for (int k = 0; k < 1000; ++k) {
    s = lgvi_step(s, 0.0, Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), kVehicle, h);
  }
  EXPECT_LT(std::abs((kVehicle.inertia * s.angular_velocity).norm() - norm0), 1e-10);
  // Spatial angular momentum is a conserved vector.
  EXPECT_LT((s.attitude() * (kVehicle.inertia * s.angular_velocity) - pi0).norm(), 1e-10);
  EXPECT_LT(rotation_defect(s.attitude()), 1e-12);
}

TEST(Lgvi, BalancedHoverIsFixedPoint) {
  RigidBodyState s;
  s.pose.position = Vec3(1, 2, -3);
  const RigidBodyState out =
      lgvi_step(s, kVehicle.mass * kGravity, Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), kVehicle,
                5e-3);
  EXPECT_LT(state_distance(out, s), 1e-14);
}

TEST(Lgvi, SecondOrderAgreementWithRk4) {
  // Constant thrust and a slowly varying torque.
  const PlantInputs in = [](double t, const RigidBodyState&, double& f, Vec3& tau, Vec3& fd,
                            Vec3& td) {
    f = 40.0;
    tau = Vec3(0.05 * std::sin(t), 0.02, -0.03);
    fd = Vec3(1, 0, 0);
    td = Vec3::Zero();
  };
  const RigidBodyState ref = run_rk4(tumbling(), in, 1e-4, 1.0);
  auto run_lgvi = [&](double h) {
    RigidBodyState s = tumbling();
    const int n = static_cast<int>(std::lround(1.0 / h));
    for (int k = 0; k < n; ++k) {
      const double t = k * h;
      LgviInputs u;
      u.thrust = 40.0;
      // Midpoint hold of the torque keeps the comparison second order.
      u.torque = Vec3(0.05 * std::sin(t + 0.5 * h), 0.02, -0.03);
      u.force_disturbance = u.force_disturbance_next = Vec3(1, 0, 0);
      s = lgvi_step(s, u, kVehicle, h);
    }
    return s;
  };
  const double e1 = state_distance(run_lgvi(0.01), ref);
  const double e2 = state_distance(run_lgvi(0.005), ref);
  EXPECT_GT(e1 / e2, 3.0);
  EXPECT_LT(e1 / e2, 5.0);
}

TEST(Lgvi, NewtonCapReported) {
  LgviOptions opts;
  opts.max_iterations = 0;
  try {
    lgvi_step(tumbling(), LgviInputs{}, kVehicle, 5e-3, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNewtonDivergence);
  }
}

TEST(Disturbance, ObserverSuiteSteps) {
  const DisturbanceModel d = observer_suite_disturbance();
  EXPECT_EQ(disturbance_at(d, 5.0).force, Vec3(5, 2, 0));
  EXPECT_EQ(disturbance_at(d, 5.0).torque, Vec3(2, 0, 1));
  EXPECT_EQ(disturbance_at(d, 20.0).force, Vec3(9, 5, 0));
  EXPECT_EQ(disturbance_at(d, 20.0).torque, Vec3(4, 0, 1));
  EXPECT_EQ(disturbance_at(d, 12.0).torque, Vec3(2, 0, 1));
  EXPECT_FALSE(is_constant(d));
}

TEST(Disturbance, AdrcSuiteAtZero) {
  const DisturbanceModel d = adrc_suite_disturbance();
  EXPECT_EQ(disturbance_at(d, 0.0).force, Vec3(50, 50, 20));
  EXPECT_EQ(disturbance_at(d, 0.0).torque, Vec3(5, 3, -3));
  EXPECT_FALSE(is_constant(d));
  EXPECT_TRUE(is_constant(DisturbanceModel{ZeroDisturbance{}}));
}

TEST(Disturbance, RejectsBadSwitchTimes) {
  StepDisturbance d;
  d.force_levels = {Vec3::Zero(), Vec3::Ones(), Vec3::Zero()};
  d.force_switch_times = {2.0, 1.0};
  EXPECT_THROW(validate(DisturbanceModel{d}), Error);
  d.force_switch_times = {1.0};
  EXPECT_THROW(validate(DisturbanceModel{d}), Error);
}

TEST(Noise, ZeroPsdLeavesTruth) {
  MeasurementNoise noise(NoiseModel{});
  RigidBodyState s = tumbling();
  s.pose.rotation = exp_so3(Vec3(0.1, 0.2, 0.3));
  const Measurement m = noise.apply(s, 1e-3);
  EXPECT_EQ(m.position, s.position());
  EXPECT_EQ(m.velocity, s.velocity);
  EXPECT_EQ(m.attitude, s.attitude());
  EXPECT_EQ(m.angular_velocity, s.angular_velocity);
}

TEST(Noise, SampleStatistics) {
  MeasurementNoise noise(NoiseModel::observer_suite(42));
  const double h = 1e-3;
  const int n = 1000000 / 3 + 1;
  double sum = 0.0, sum_sq = 0.0, att_sq = 0.0;
  int count = 0;
  for (int i = 0; i < n; ++i) {
    const NoiseDraw d = noise.draw(h);
    for (int a = 0; a < 3; ++a) {
      sum += d.position(a);
      sum_sq += d.position(a) * d.position(a);
      att_sq += d.attitude(a) * d.attitude(a);
      ++count;
    }
  }
  const double sigma = std::sqrt(sum_sq / count);
  EXPECT_NEAR(sigma, std::sqrt(3e-5), 0.01 * std::sqrt(3e-5));
  EXPECT_NEAR(std::sqrt(3e-5), 5.48e-3, 1e-5);
  EXPECT_LT(std::abs(sum / count), 5.0 * sigma / std::sqrt(count));
  EXPECT_NEAR(std::sqrt(att_sq / count), std::sqrt(3e-5), 0.01 * std::sqrt(3e-5));
}

TEST(Noise, DeterministicAndOnManifold) {
  MeasurementNoise a(NoiseModel::observer_suite(7).scaled(1e4));
  MeasurementNoise b(NoiseModel::observer_suite(7).scaled(1e4));
  const RigidBodyState s = tumbling();
  for (int i = 0; i < 100; ++i) {
    const Measurement ma = a.apply(s, 1e-3);
    const Measurement mb = b.apply(s, 1e-3);
    EXPECT_EQ(ma.attitude, mb.attitude);
    EXPECT_EQ(ma.position, mb.position);
    EXPECT_TRUE(is_rotation(ma.attitude));
  }
}

TEST(Reference, KnownSamples) {
  const ReferenceSample hover = reference_at({TrajectoryKind::kHover}, 7.3);
  EXPECT_EQ(hover.position, Vec3(0, 0, -3));
  EXPECT_TRUE(hover.velocity.isZero());
  EXPECT_TRUE(hover.acceleration.isZero());
  EXPECT_LT((reference_at({TrajectoryKind::kFastSwing}, 1.0).position - Vec3(5, 0, -3)).norm(),
            1e-14);
  EXPECT_LT((reference_at({TrajectoryKind::kLgviTrack}, 0.5).position - Vec3(2, 1, 2)).norm(),
            1e-14);
}

TEST(Reference, DerivativesConsistent) {
  const double d = 1e-5;
  for (auto kind : {TrajectoryKind::kHover, TrajectoryKind::kSlowSwing, TrajectoryKind::kFastSwing,
                    TrajectoryKind::kHighPitch, TrajectoryKind::kLgviTrack}) {
    for (double t : {0.3, 1.7, 4.2, 11.0}) {
      const ReferenceSample r = reference_at({kind}, t);
      const Vec3 dv = (reference_at({kind}, t + d).position - reference_at({kind}, t - d).position) /
                      (2 * d);
      const Vec3 da = (reference_at({kind}, t + d).velocity - reference_at({kind}, t - d).velocity) /
                      (2 * d);
      EXPECT_LT((dv - r.velocity).norm(), 1e-6 * std::max(1.0, r.velocity.norm()));
      EXPECT_LT((da - r.acceleration).norm(), 1e-6 * std::max(1.0, r.acceleration.norm()));
    }
  }
}

TEST(Reference, NamesRoundTrip) {
  for (auto kind : {TrajectoryKind::kHover, TrajectoryKind::kSlowSwing, TrajectoryKind::kFastSwing,
                    TrajectoryKind::kHighPitch, TrajectoryKind::kLgviTrack}) {
    EXPECT_EQ(trajectory_from_string(to_string(kind)), kind);
  }
  EXPECT_THROW(trajectory_from_string("loop"), Error);
}
