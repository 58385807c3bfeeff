// Command-line front end: single runs, gain checks and the two experiment suites.
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "ffts/harness.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kRuntimeError = 1;
constexpr int kValidationFailure = 2;

void print_metrics(const std::string& name, const ffts::Metrics& m) {
  auto opt = [](const std::optional<double>& v) {
    return v ? std::to_string(*v) : std::string("none");
  };
  std::cout << name << ": settle(pos " << opt(m.position_settling) << ", att "
            << opt(m.attitude_settling) << ", force " << opt(m.force_settling) << ", torque "
            << opt(m.torque_settling) << ") steady(pos " << m.steady_position << ", att "
            << m.steady_attitude << ", force " << m.steady_force << ", torque "
            << m.steady_torque << ")\n";
}

int suite(const std::vector<ffts::SuiteRun>& runs, const std::string& out) {
  ffts::write_suite(runs, out);
  for (const auto& r : runs) {
    for (const auto& w : r.record.warnings) std::cerr << r.name << ": warning: " << w << "\n";
    print_metrics(r.name, r.metrics);
  }
  return kOk;
}

std::uint64_t suite_seed() {
  ffts::Scenario probe;
  ffts::apply_seed_environment(probe);
  return probe.seed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-time observer and controller simulations on SE(3)"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string integrator;
  bool override_check = false;

  auto* simulate = app.add_subcommand("simulate", "Run one scenario file");
  simulate->add_option("--scenario", scenario_path, "Scenario file")->required();
  simulate->add_option("--out", out_dir, "Output directory")->required();
  simulate->add_option("--seed", seed, "Noise seed (overrides SEED and the file)");
  simulate->add_option("--integrator", integrator, "rk4 or lgvi")
      ->check(CLI::IsMember({"rk4", "lgvi"}));
  simulate->add_flag("--override-gain-check", override_check, "Run even if gain checks fail");

  auto* validate = app.add_subcommand("validate-gains", "Check the gain constraints of a scenario");
  validate->add_option("--scenario", scenario_path, "Scenario file")->required();

  auto* observer = app.add_subcommand("observer-suite", "Four references, noise off and on");
  observer->add_option("--out", out_dir, "Output directory")->required();

  auto* adrc = app.add_subcommand("adrc-suite", "Four disturbance-rejection configurations");
  adrc->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kRuntimeError;
  }

  try {
    if (*simulate) {
      ffts::Scenario sc = ffts::load_scenario(scenario_path);
      ffts::apply_seed_environment(sc);
      if (seed) sc.seed = *seed;
      if (integrator == "rk4") sc.integrator = ffts::Integrator::kRk4;
      if (integrator == "lgvi") sc.integrator = ffts::Integrator::kLgvi;
      if (override_check) sc.override_gain_check = true;

      const ffts::RunRecord rec = ffts::run_scenario(sc);
      for (const auto& w : rec.warnings) std::cerr << "warning: " << w << "\n";
      const ffts::Metrics m = ffts::compute_metrics(rec);
      std::filesystem::create_directories(out_dir);
      const auto dir = std::filesystem::path(out_dir);
      ffts::write_csv(rec, (dir / (sc.name + ".csv")).string());
      ffts::write_metrics_csv({{sc.name, m}}, (dir / "metrics.csv").string());
      print_metrics(sc.name, m);
      return kOk;
    }
    if (*validate) {
      const ffts::Scenario sc = ffts::load_scenario(scenario_path);
      const ffts::GainValidation v = ffts::validate_scenario_gains(sc);
      std::cout << v.describe();
      std::cout << (v.passes() ? "all constraints pass\n" : "gain constraints violated\n");
      return v.passes() ? kOk : kValidationFailure;
    }
    if (*observer) return suite(ffts::observer_suite(suite_seed()), out_dir);
    if (*adrc) return suite(ffts::adrc_suite(suite_seed()), out_dir);
  } catch (const ffts::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ffts::ErrorCode::kGainValidationFailed:
      case ffts::ErrorCode::kParseError:
        return kValidationFailure;
      default:
        return kRuntimeError;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kRuntimeError;
}
