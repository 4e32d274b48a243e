#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hexapose/pipeline.hpp"
#include "hexapose/simulator.hpp"

namespace hexapose {

/// All structured files carry this version; anything else is rejected.
constexpr int kFormatVersion = 1;

/// The one rotation convention the toolkit implements; stamped into every
/// file header so the data stays self-describing.
constexpr const char* kEulerConventionTag = "fixed-XYZ";

struct MetrologyDefaults {
  int points_per_ball = 9;
  double congruence_tol_mm = kDefaultCongruenceTolMm;
};

/// Project-wide settings: the machine and how to write files.
struct ProjectConfig {
  HexapodGeometry geometry;
  LegThermalModel thermal = LegThermalModel::uniform();
  MetrologyDefaults metrology;
  std::string angle_unit = "deg";  // unit used when emitting files
  double reference_time_budget_s = 300.0;
};

// Loaders throw ConfigError on missing files, parse failures, unknown format
// versions or invalid values; savers throw IoError when the file cannot be
// written. Angles are converted between the file's declared unit and radians
// at this boundary.

ProjectConfig load_config(const std::filesystem::path& path);

HexapodGeometry load_geometry(const std::filesystem::path& path);
void save_geometry(const std::filesystem::path& path, const HexapodGeometry& geom);

MeasurementSession load_session(const std::filesystem::path& path);
void save_session(const std::filesystem::path& path, const MeasurementSession& session,
                  const std::string& angle_unit = "deg");

/// Scenario files hold the campaign (plan, schedule, noise, seed, placement);
/// machine description and metrology defaults come from the project config.
ScenarioConfig load_scenario(const std::filesystem::path& path,
                             const ProjectConfig& config);

GroundTruth load_ground_truth(const std::filesystem::path& path);
void save_ground_truth(const std::filesystem::path& path, const GroundTruth& truth,
                       const std::string& angle_unit = "deg");

ComparisonReport load_report(const std::filesystem::path& path);
void save_report(const std::filesystem::path& path, const ComparisonReport& report,
                 const std::string& angle_unit = "deg");

struct EstimateRow {
  size_t record_index = 0;
  double timestamp_s = 0.0;
  Pose6 conventional;
  Pose6 decoupled;
  LegDeflections dq_ref_mm = Vec6::Zero();
  LegDeflections dq_target_mm = Vec6::Zero();
  Vec6 implied_dt_k = Vec6::Zero();
  size_t ref_t1_index = 0;
  size_t ref_t2_index = 0;
};

struct EstimatesFile {
  Pose6 reference_pose_commanded;
  Pose6 target_pose_commanded;
  std::vector<EstimateRow> rows;
};

void save_estimates(const std::filesystem::path& path,
                    const MeasurementSession& session,
                    const std::vector<TargetEstimates>& estimates,
                    const std::string& angle_unit = "deg");
EstimatesFile load_estimates(const std::filesystem::path& path);

/// Probe points as a flat delimited table: one "x y z" (or comma-separated)
/// row per point, '#' comments, and a mandatory "# units: mm" header line.
std::vector<Point3> load_probe_points(const std::filesystem::path& path);

/// Long-format table of a comparison report (one row per trial, method and
/// pose component) for direct plotting.
void write_report_csv(std::ostream& out, const ComparisonReport& report,
                      const std::string& angle_unit = "deg");
void save_report_csv(const std::filesystem::path& path, const ComparisonReport& report,
                     const std::string& angle_unit = "deg");

}  // namespace hexapose
