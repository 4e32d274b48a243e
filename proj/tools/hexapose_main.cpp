// Command-line front end: simulate / correct / fit / report.
//
// Exit codes: 0 success, 2 configuration or input-file problem, 3 numeric or
// protocol failure, 4 output I/O failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "hexapose/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

int run_simulate(const std::string& config_path, const std::string& scenario_path,
                 const std::string& out_dir, std::optional<std::uint64_t> seed,
                 const std::string& angle_unit) {
  const hexapose::ProjectConfig config = hexapose::load_config(config_path);
  hexapose::ScenarioConfig scenario = hexapose::load_scenario(scenario_path, config);
  if (seed) scenario.rng_seed = *seed;
  const std::string unit = angle_unit.empty() ? config.angle_unit : angle_unit;

  const hexapose::SimulatedSession sim = hexapose::simulate_session(scenario);
  const hexapose::ComparisonReport report = hexapose::run_comparison(scenario);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw hexapose::IoError("cannot create output directory '" + out_dir + "'");
  const std::filesystem::path dir(out_dir);
  hexapose::save_session(dir / "session.json", sim.session, unit);
  hexapose::save_ground_truth(dir / "ground_truth.json", sim.truth, unit);
  hexapose::save_report(dir / "report.json", report, unit);
  std::cout << "wrote " << (dir / "session.json").string() << ", "
            << (dir / "ground_truth.json").string() << ", "
            << (dir / "report.json").string() << "\n";
  return kExitOk;
}

int run_correct(const std::string& config_path, const std::string& session_path,
                const std::string& out_path, const std::string& angle_unit) {
  const hexapose::ProjectConfig config = hexapose::load_config(config_path);
  const hexapose::MeasurementSession session = hexapose::load_session(session_path);
  const std::string unit = angle_unit.empty() ? config.angle_unit : angle_unit;

  for (const std::string& warning :
       hexapose::session_warnings(session, config.reference_time_budget_s)) {
    std::cerr << "warning: " << warning << "\n";
  }
  const auto estimates =
      hexapose::process_session(config.geometry, config.thermal, session);
  hexapose::save_estimates(out_path, session, estimates, unit);
  std::cout << "wrote " << out_path << " (" << estimates.size() << " target"
            << (estimates.size() == 1 ? "" : "s") << ")\n";
  return kExitOk;
}

int run_fit(const std::string& points_path, std::optional<double> nominal_radius) {
  const std::vector<hexapose::Point3> points =
      hexapose::load_probe_points(points_path);
  hexapose::SphereFitOptions options;
  options.nominal_radius_mm = nominal_radius;
  const hexapose::SphereFit fit = hexapose::fit_sphere(points, options);

  nlohmann::ordered_json j;
  j["center_mm"] = {fit.center.x(), fit.center.y(), fit.center.z()};
  j["radius_mm"] = fit.radius_mm;
  j["rms_residual_mm"] = fit.rms_residual_mm;
  j["points"] = points.size();
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int run_report(const std::string& report_path, const std::string& out_path,
               const std::string& angle_unit) {
  const hexapose::ComparisonReport report = hexapose::load_report(report_path);
  const std::string unit = angle_unit.empty() ? "deg" : angle_unit;
  if (out_path == "-") {
    hexapose::write_report_csv(std::cout, report, unit);
  } else {
    hexapose::save_report_csv(out_path, report, unit);
    std::cout << "wrote " << out_path << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hexapod pose metrology: thermal-deflection-decoupled pose "
               "measurement, kinematics and synthetic experiments"};
  app.require_subcommand(1);

  std::string config_path, scenario_path, session_path, points_path, report_path;
  std::string out_path, angle_unit;
  std::optional<std::uint64_t> seed;
  std::optional<double> nominal_radius;

  auto* simulate = app.add_subcommand(
      "simulate", "synthesize a measurement session from a scenario");
  simulate->add_option("--config", config_path, "project config (json)")->required();
  simulate->add_option("--scenario", scenario_path, "scenario file (json)")->required();
  simulate->add_option("--out", out_path, "output directory")->required();
  simulate->add_option("--seed", seed, "override the scenario rng seed");
  simulate->add_option("--angle-unit", angle_unit, "deg or rad (default from config)");

  auto* correct = app.add_subcommand(
      "correct", "post-process a session with both measurement methods");
  correct->add_option("--config", config_path, "project config (json)")->required();
  correct->add_option("--session", session_path, "session file (json)")->required();
  correct->add_option("--out", out_path, "estimates output file")->required();
  correct->add_option("--angle-unit", angle_unit, "deg or rad (default from config)");

  auto* fit = app.add_subcommand("fit", "least-squares sphere through probe points");
  fit->add_option("--points", points_path, "probe point table")->required();
  fit->add_option("--nominal-radius", nominal_radius, "radius prior in mm");

  auto* report = app.add_subcommand(
      "report", "flatten a comparison report into a plot-ready csv");
  report->add_option("--report", report_path, "report file (json)")->required();
  report->add_option("--out", out_path, "csv output path, '-' for stdout")->required();
  report->add_option("--angle-unit", angle_unit, "deg or rad (default deg)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (simulate->parsed()) {
      return run_simulate(config_path, scenario_path, out_path, seed, angle_unit);
    }
    if (correct->parsed()) {
      return run_correct(config_path, session_path, out_path, angle_unit);
    }
    if (fit->parsed()) {
      return run_fit(points_path, nominal_radius);
    }
    if (report->parsed()) {
      return run_report(report_path, out_path, angle_unit);
    }
  } catch (const hexapose::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const hexapose::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const hexapose::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitConfig;
}
