#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ffts/harness.hpp"

using namespace ffts;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(cell);
  return out;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ffts_harness_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FFTS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Hover with no disturbance, plant started on the reference, observers on the truth.
Scenario quiet_hover(Integrator integrator) {
  Scenario sc = adrc_scenario();
  sc.name = "quiet_hover";
  sc.trajectory = {TrajectoryKind::kHover};
  sc.disturbance = ZeroDisturbance{};
  sc.integrator = integrator;
  sc.initial = RigidBodyState{};
  sc.initial.pose.position = reference_at(sc.trajectory, 0.0).position;
  sc.duration = 1.0;
  sc.step = 1e-2;
  return sc;
}

Scenario short_adrc() {
  Scenario sc = adrc_scenario();
  sc.duration = 0.5;
  return sc;
}

}  // namespace

TEST(SettlingTime, Examples) {
  const std::vector<double> t{0, 1, 2, 3, 4};
  EXPECT_EQ(settling_time(t, {5, 3, 0.5, 0.2, 0.1}, 1.0), 2.0);
  EXPECT_EQ(settling_time(t, {0.1, 0.1, 0.1, 0.1, 0.1}, 1.0), 0.0);
  EXPECT_FALSE(settling_time(t, {0, 0, 0, 0, 2}, 1.0).has_value());
  // A late excursion resets the time.
  EXPECT_EQ(settling_time(t, {0, 2, 0, 2, 0}, 1.0), 4.0);
  EXPECT_FALSE(settling_time(t, {0, 0, 0, 0, NAN}, 1.0).has_value());
  EXPECT_THROW(settling_time(t, {0, 0, 0, 0, 0}, 0.0), Error);
  EXPECT_THROW(settling_time(t, {0, 0}, 1.0), Error);
}

TEST(RunScenario, RowCountAndTimes) {
  Scenario sc = short_adrc();
  const RunRecord rec = run_scenario(sc);
  ASSERT_EQ(rec.rows.size(), static_cast<std::size_t>(std::floor(0.5 / 5e-3)) + 1);
  for (std::size_t k = 0; k < rec.rows.size(); ++k) {
    EXPECT_NEAR(rec.rows[k].t, k * 5e-3, 1e-12);
  }
}

TEST(RunScenario, QuietHoverStaysOnReference) {
  for (Integrator integ : {Integrator::kRk4, Integrator::kLgvi}) {
    const RunRecord rec = run_scenario(quiet_hover(integ));
    for (const RunRow& r : rec.rows) {
      EXPECT_LE(r.position_error.norm(), 1e-9);
      EXPECT_LE(r.attitude_error, 1e-9);
      EXPECT_LE(r.e_phi.norm(), 1e-9);
      EXPECT_LE(r.e_tau.norm(), 1e-9);
      EXPECT_NEAR(r.thrust, 4.34 * kGravity, 1e-9);
    }
  }
}

TEST(RunScenario, RotationsStayOrthonormal) {
  const RunRecord rec = run_scenario(short_adrc());
  for (const RunRow& r : rec.rows) EXPECT_LT(r.rotation_defect, 1e-9);
}

TEST(RunScenario, Deterministic) {
  Scenario sc = observer_scenario(TrajectoryKind::kFastSwing);
  sc.noise = NoiseModel::observer_suite();
  sc.seed = 7;
  sc.duration = 0.3;
  const RunRecord a = run_scenario(sc), b = run_scenario(sc);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    EXPECT_EQ(a.rows[k].position, b.rows[k].position);
    EXPECT_EQ(a.rows[k].e_phi, b.rows[k].e_phi);
    EXPECT_EQ(a.rows[k].torque, b.rows[k].torque);
  }
  sc.seed = 8;
  const RunRecord c = run_scenario(sc);
  EXPECT_NE(a.rows.back().e_phi, c.rows.back().e_phi);
}

TEST(RunScenario, RejectsBadGainsUnlessOverridden) {
  Scenario sc = short_adrc();
  sc.translational_ctrl.k_td = 0.2;
  try {
    run_scenario(sc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGainValidationFailed);
    EXPECT_NE(std::string(e.what()).find("FAIL"), std::string::npos);
  }
  sc.override_gain_check = true;
  sc.duration = 0.05;
  const RunRecord rec = run_scenario(sc);
  EXPECT_FALSE(rec.warnings.empty());
}

TEST(RunScenario, RejectsBadStep) {
  Scenario sc = short_adrc();
  sc.step = 0.0;
  EXPECT_THROW(run_scenario(sc), Error);
}

TEST(Csv, HeaderRowsAndRoundTrip) {
  const RunRecord rec = run_scenario(short_adrc());
  const fs::path path = scratch("csv") / "run.csv";
  write_csv(rec, path.string());

  const std::string raw = read_all(path.string());
  EXPECT_EQ(raw.find('\r'), std::string::npos);
  const auto lines = read_lines(path.string());
  ASSERT_EQ(lines.size(), rec.rows.size() + 1);

  const auto header = split(lines[0]);
  ASSERT_EQ(header, csv_columns());
  EXPECT_EQ(header.front(), "t");

  std::size_t col_bx = 0, col_f = 0;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "btil_x") col_bx = i;
    if (header[i] == "f") col_f = i;
  }
  for (std::size_t k = 0; k < rec.rows.size(); ++k) {
    const auto cells = split(lines[k + 1]);
    ASSERT_EQ(cells.size(), header.size());
    const double bx = rec.rows[k].position_error.x();
    const double f = rec.rows[k].thrust;
    EXPECT_LE(std::abs(std::stod(cells[col_bx]) - bx), 1e-8 * std::max(1.0, std::abs(bx)));
    EXPECT_LE(std::abs(std::stod(cells[col_f]) - f), 1e-8 * std::max(1.0, std::abs(f)));
  }
}

TEST(Csv, EmptyRecordWritesHeaderOnly) {
  RunRecord rec;
  const fs::path path = scratch("empty") / "run.csv";
  write_csv(rec, path.string());
  const auto lines = read_lines(path.string());
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(split(lines[0]), csv_columns());
}

TEST(Csv, UnwritablePathThrows) {
  try {
    write_csv(RunRecord{}, "/nonexistent_dir_for_ffts/run.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoFailure);
  }
}

TEST(Metrics, SteadyValuesUseTheLastFifth) {
  RunRecord rec;
  for (int k = 0; k <= 100; ++k) {
    RunRow r;
    r.t = 0.01 * k;
    r.position_error = Vec3(k < 80 ? 1.0 : 1e-5, 0, 0);
    rec.rows.push_back(r);
  }
  const Metrics m = compute_metrics(rec);
  EXPECT_NEAR(m.steady_position, 1e-5, 1e-12);
  EXPECT_DOUBLE_EQ(m.peak_position, 1.0);
  ASSERT_TRUE(m.position_settling.has_value());
  EXPECT_NEAR(*m.position_settling, 0.8, 1e-12);
}

TEST(Parser, DefaultsAndOverrides) {
  const Scenario sc = parse_scenario(
      "[scenario]\npreset = adrc\nstep = 0.01  # comment\n"
      "[translational_control]\nk_td = 5\n");
  EXPECT_DOUBLE_EQ(sc.step, 0.01);
  EXPECT_DOUBLE_EQ(sc.translational_ctrl.k_td, 5.0);
  EXPECT_DOUBLE_EQ(sc.attitude_ctrl.k_ad, adrc_scenario().attitude_ctrl.k_ad);
}

TEST(Parser, ShippedScenariosLoad) {
  for (const auto& entry : fs::directory_iterator(FFTS_SCENARIO_DIR)) {
    EXPECT_NO_THROW(load_scenario(entry.path().string())) << entry.path();
  }
  const Scenario file = load_scenario(std::string(FFTS_SCENARIO_DIR) + "/adrc.cfg");
  const Scenario builtin = adrc_scenario();
  EXPECT_EQ(file.step, builtin.step);
  EXPECT_EQ(file.initial.velocity, builtin.initial.velocity);
  EXPECT_EQ(file.vehicle.inertia, builtin.vehicle.inertia);
}

TEST(Parser, ErrorsCarryLineNumbers) {
  const auto expect_parse_error = [](const std::string& text, const std::string& fragment) {
    try {
      parse_scenario(text);
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParseError);
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
  };
  expect_parse_error("[scenario]\nstep = 0.01\nbogus = 1\n", "line 3");
  expect_parse_error("[scenario]\nstep = abc\n", "line 2");
  expect_parse_error("[vehicle]\ninertia = 1 2\n", "line 2");
  expect_parse_error("this is not a key value line\n", "line 1");
  EXPECT_THROW(load_scenario("/nonexistent/ffts.cfg"), Error);
}

TEST(Seed, EnvironmentOverridesFile) {
  Scenario sc = parse_scenario("[scenario]\nseed = 3\n");
  EXPECT_EQ(sc.seed, 3u);
  ::unsetenv("SEED");
  apply_seed_environment(sc);
  EXPECT_EQ(sc.seed, 3u);
  ::setenv("SEED", "11", 1);
  apply_seed_environment(sc);
  EXPECT_EQ(sc.seed, 11u);
  ::setenv("SEED", "x", 1);
  EXPECT_THROW(apply_seed_environment(sc), Error);
  ::unsetenv("SEED");
}

TEST(Cli, ExitCodes) {
  const std::string dir = FFTS_SCENARIO_DIR;
  EXPECT_EQ(run_cli("validate-gains --scenario " + dir + "/adrc.cfg"), 0);
  EXPECT_EQ(run_cli("validate-gains --scenario " + dir + "/adrc_bad_gains.cfg"), 2);
  const fs::path out = scratch("cli_bad");
  EXPECT_EQ(run_cli("simulate --scenario " + dir + "/adrc_bad_gains.cfg --out " + out.string()), 2);
  EXPECT_EQ(run_cli("simulate --scenario /nonexistent.cfg --out " + out.string()), 1);
  EXPECT_EQ(run_cli("no-such-command"), 1);
}

TEST(Cli, SimulateWritesRunAndMetrics) {
  const fs::path out = scratch("cli_sim");
  const fs::path cfg = out / "short.cfg";
  std::ofstream(cfg) << "[scenario]\npreset = adrc\nname = short\nduration = 0.2\n";
  ASSERT_EQ(run_cli("simulate --scenario " + cfg.string() + " --out " + out.string()), 0);
  EXPECT_EQ(read_lines((out / "short.csv").string()).size(), 41u + 1u);
  EXPECT_TRUE(fs::exists(out / "metrics.csv"));
}

TEST(Cli, AdrcSuiteWritesFourRuns) {
  const fs::path out = scratch("cli_suite");
  ASSERT_EQ(run_cli("adrc-suite --out " + out.string()), 0);
  for (const char* name : {"adrc_none", "adrc_force", "adrc_torque", "adrc_both"}) {
    EXPECT_TRUE(fs::exists(out / (std::string(name) + ".csv"))) << name;
  }
  const auto metrics = read_lines((out / "metrics.csv").string());
  ASSERT_EQ(metrics.size(), 5u);
  EXPECT_EQ(split(metrics[0]).front(), "run");
}
