#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ffts/controller.hpp"
#include "ffts/observer.hpp"
#include "ffts/sim.hpp"

namespace ffts {

enum class Integrator { kRk4, kLgvi };
enum class ThrustMode { kProjection, kNorm };

/// Everything needed to reproduce one closed-loop run.
struct Scenario {
  std::string name = "adrc";
  TrajectoryRef trajectory{TrajectoryKind::kLgviTrack};
  DisturbanceModel disturbance = adrc_suite_disturbance();
  NoiseModel noise;
  VehicleParams vehicle;
  EsoGains translational_eso;
  EsoGains rotational_eso;
  TranslationalCtrlGains translational_ctrl;
  AttitudeCtrlGains attitude_ctrl;
  bool reject_force = true;
  bool reject_torque = true;
  bool override_gain_check = false;
  Integrator integrator = Integrator::kLgvi;
  ThrustMode thrust_mode = ThrustMode::kProjection;
  Vec3 heading = Vec3::UnitX();
  double step = 5e-3;
  double duration = 5.0;
  std::uint64_t seed = 0;
  RigidBodyState initial;

  /// Throws kInvalidGains for a non-positive step, duration < step or bad vehicle data.
  void validate() const;
  std::size_t step_count() const;
};

/// Closed-loop disturbance-rejection run (LGVI, 5 s, sinusoidal disturbances).
Scenario adrc_scenario();

/// Observer comparison run on one of the four hover/swing/pitch references
/// (RK4, 25 s, step disturbances, no rejection in the control laws).
Scenario observer_scenario(TrajectoryKind trajectory);

/// Line-oriented `section.key = value` configuration. A `[section]` line prefixes the
/// keys that follow it; `#` starts a comment. `scenario.preset` (adrc | observer) selects
/// the defaults and is applied before every other key. Malformed input throws kParseError
/// with the offending line number.
Scenario parse_scenario(const std::string& text);

/// Reads and parses a scenario file. Throws kIoFailure when unreadable.
Scenario load_scenario(const std::string& path);

/// Applies the SEED environment variable when set.
void apply_seed_environment(Scenario& sc);

}  // namespace ffts
