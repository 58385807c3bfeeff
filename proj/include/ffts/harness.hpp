#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ffts/scenario.hpp"

namespace ffts {

/// One sample of a closed-loop run. Tracking and estimation errors use the true state.
struct RunRow {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 position_error = Vec3::Zero();  // b - b_d
  Vec3 velocity_error = Vec3::Zero();  // v - v_d
  double attitude_error = 0.0;         // principal angle of Q = R_d^T R
  double angular_velocity_error = 0.0; // |Omega - Q^T Omega_d|
  Vec3 e_b = Vec3::Zero();
  Vec3 e_v = Vec3::Zero();
  Vec3 e_phi = Vec3::Zero();
  double estimator_attitude_error = 0.0;  // principal angle of E_R
  Vec3 e_omega = Vec3::Zero();
  Vec3 e_tau = Vec3::Zero();
  double thrust = 0.0;
  Vec3 torque = Vec3::Zero();
  double v_t = 0.0;  // translational closed-loop Lyapunov value, NaN when not defined
  double v_a = 0.0;  // attitude closed-loop Lyapunov value, NaN when not defined
  double rotation_defect = 0.0;  // max over the plant and observer attitudes
};

struct RunRecord {
  std::string name;
  std::vector<RunRow> rows;
  EsoGainReport translational_report;
  EsoGainReport rotational_report;
  CtrlGainReport control_report;
  std::vector<std::string> warnings;
};

struct Metrics {
  std::optional<double> position_settling;
  std::optional<double> attitude_settling;
  std::optional<double> force_settling;
  std::optional<double> torque_settling;
  double steady_position = 0.0;  // mean over the last 20% of the run
  double steady_attitude = 0.0;
  double steady_force = 0.0;
  double steady_torque = 0.0;
  double peak_position = 0.0;
  double peak_attitude = 0.0;
  double peak_force = 0.0;
  double peak_torque = 0.0;
};

struct GainValidation {
  EsoGainReport translational;
  EsoGainReport rotational;
  CtrlGainReport control;

  bool passes() const;
  /// Human-readable constraint table.
  std::string describe() const;
};

GainValidation validate_scenario_gains(const Scenario& sc);

/// Coupled plant, observers and controller from t = 0 to the scenario duration.
/// Throws kGainValidationFailed (unless overridden) and kNumericalBlowup.
RunRecord run_scenario(const Scenario& sc);

/// Smallest t* such that every sample at or after t* is below tol; nullopt when the
/// final sample is not.
std::optional<double> settling_time(const std::vector<double>& t, const std::vector<double>& value,
                                    double tol);

inline constexpr double kTrackingTolerance = 1e-3;
inline constexpr double kEstimationTolerance = 1e-4;

Metrics compute_metrics(const RunRecord& record, double tracking_tol = kTrackingTolerance,
                        double estimation_tol = kEstimationTolerance);

/// Fixed header, %.9g values, LF line endings. Throws kIoFailure.
void write_csv(const RunRecord& record, const std::string& path);
const std::vector<std::string>& csv_columns();

void write_metrics_csv(const std::vector<std::pair<std::string, Metrics>>& rows,
                       const std::string& path);

struct SuiteRun {
  std::string name;
  RunRecord record;
  Metrics metrics;
};

/// Four reference trajectories, each without and with the suite sensor noise levels.
std::vector<SuiteRun> observer_suite(std::uint64_t seed = 0);

/// The four disturbance-rejection configurations: none, force, torque, both.
std::vector<SuiteRun> adrc_suite(std::uint64_t seed = 0);

/// Writes one CSV per run plus metrics.csv into `dir` (created when missing).
void write_suite(const std::vector<SuiteRun>& runs, const std::string& dir);

}  // namespace ffts
