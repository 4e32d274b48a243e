#include "hexapose/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace hexapose {

namespace {

using Json = nlohmann::ordered_json;

double angle_to_rad(double value, const std::string& unit) {
  return unit == "deg" ? deg2rad(value) : value;
}

double angle_from_rad(double value, const std::string& unit) {
  return unit == "deg" ? rad2deg(value) : value;
}

void check_angle_unit(const std::string& unit) {
  if (unit != "deg" && unit != "rad") {
    throw ConfigError("angle_unit must be 'deg' or 'rad', got '" + unit + "'");
  }
}

Json load_json(const std::filesystem::path& path, const std::string& kind) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open " + kind + " file '" + path.string() + "'");
  }
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("failed to parse '" + path.string() + "': " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed while writing '" + path.string() + "'");
}

Json header(const std::string& kind, const std::string& angle_unit) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = kind;
  j["length_unit"] = "mm";
  j["angle_unit"] = angle_unit;
  j["euler_convention"] = kEulerConventionTag;
  return j;
}

struct Header {
  std::string angle_unit;
};

Header check_header(const Json& j, const std::string& kind,
                    const std::filesystem::path& path) {
  if (!j.is_object()) {
    throw ConfigError("'" + path.string() + "': expected a JSON object");
  }
  if (!j.contains("format_version") || !j["format_version"].is_number_integer()) {
    throw ConfigError("'" + path.string() + "': missing format_version");
  }
  if (j["format_version"].get<int>() != kFormatVersion) {
    throw ConfigError("'" + path.string() + "': unsupported format_version " +
                      j["format_version"].dump() + " (expected " +
                      std::to_string(kFormatVersion) + ")");
  }
  if (j.value("kind", "") != kind) {
    throw ConfigError("'" + path.string() + "': expected kind '" + kind +
                      "', got '" + j.value("kind", "<missing>") + "'");
  }
  if (j.value("length_unit", "mm") != "mm") {
    throw ConfigError("'" + path.string() + "': only mm lengths are supported");
  }
  if (j.contains("euler_convention") &&
      j["euler_convention"].get<std::string>() != kEulerConventionTag) {
    throw ConfigError("'" + path.string() + "': unsupported euler_convention '" +
                      j["euler_convention"].get<std::string>() + "'");
  }
  Header h;
  h.angle_unit = j.value("angle_unit", "deg");
  check_angle_unit(h.angle_unit);
  return h;
}

Json pose_to_json(const Pose6& p, const std::string& unit) {
  Json j;
  j["tx"] = p.tx;
  j["ty"] = p.ty;
  j["tz"] = p.tz;
  j["rx"] = angle_from_rad(p.rx, unit);
  j["ry"] = angle_from_rad(p.ry, unit);
  j["rz"] = angle_from_rad(p.rz, unit);
  return j;
}

Pose6 pose_from_json(const Json& j, const std::string& unit, const std::string& where) {
  for (const char* key : {"tx", "ty", "tz", "rx", "ry", "rz"}) {
    if (!j.contains(key) || !j[key].is_number()) {
      throw ConfigError(where + ": pose is missing numeric field '" + key + "'");
    }
  }
  Pose6 p;
  p.tx = j["tx"].get<double>();
  p.ty = j["ty"].get<double>();
  p.tz = j["tz"].get<double>();
  p.rx = angle_to_rad(j["rx"].get<double>(), unit);
  p.ry = angle_to_rad(j["ry"].get<double>(), unit);
  p.rz = angle_to_rad(j["rz"].get<double>(), unit);
  if (!p.all_finite()) throw ConfigError(where + ": non-finite pose component");
  return p;
}

Json vec6_to_json(const Vec6& v) {
  Json j = Json::array();
  for (int i = 0; i < 6; ++i) j.push_back(v[i]);
  return j;
}

Vec6 vec6_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 6) {
    throw ConfigError(where + ": expected an array of 6 numbers");
  }
  Vec6 v;
  for (int i = 0; i < 6; ++i) {
    if (!j[i].is_number()) throw ConfigError(where + ": non-numeric entry");
    v[i] = j[i].get<double>();
  }
  return v;
}

Json point_to_json(const Point3& p) { return Json::array({p.x(), p.y(), p.z()}); }

Point3 point_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError(where + ": expected [x, y, z]");
  }
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number()) throw ConfigError(where + ": non-numeric coordinate");
  }
  return Point3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

Vec6 scalar_or_vec6(const Json& j, const std::string& where) {
  if (j.is_number()) return Vec6::Constant(j.get<double>());
  return vec6_from_json(j, where);
}

Json geometry_to_json(const HexapodGeometry& geom) {
  Json j = header("hexapose_geometry", "deg");
  j.erase("angle_unit");  // pure lengths
  Json base = Json::array(), platform = Json::array();
  for (int i = 0; i < 6; ++i) {
    base.push_back(point_to_json(geom.base_joints[i]));
    platform.push_back(point_to_json(geom.platform_joints[i]));
  }
  j["base_joints_mm"] = base;
  j["platform_joints_mm"] = platform;
  return j;
}

HexapodGeometry geometry_from_json(const Json& j, const std::filesystem::path& path) {
  for (const char* key : {"base_joints_mm", "platform_joints_mm"}) {
    if (!j.contains(key) || !j[key].is_array() || j[key].size() != 6) {
      throw ConfigError("'" + path.string() + "': geometry needs 6 entries in '" +
                        key + "'");
    }
  }
  HexapodGeometry geom;
  for (size_t i = 0; i < 6; ++i) {
    geom.base_joints[i] = point_from_json(j["base_joints_mm"][i], "base joint");
    geom.platform_joints[i] =
        point_from_json(j["platform_joints_mm"][i], "platform joint");
  }
  geom.validate();
  return geom;
}

LegThermalModel thermal_from_json(const Json& j, const std::string& where) {
  for (const char* key : {"alpha_al_per_k", "alpha_st_per_k", "l_al_mm"}) {
    if (!j.contains(key)) {
      throw ConfigError(where + ": thermal model is missing '" + std::string(key) + "'");
    }
  }
  LegThermalModel model;
  model.alpha_al = scalar_or_vec6(j["alpha_al_per_k"], where + ".alpha_al_per_k");
  model.alpha_st = scalar_or_vec6(j["alpha_st_per_k"], where + ".alpha_st_per_k");
  model.l_al = scalar_or_vec6(j["l_al_mm"], where + ".l_al_mm");
  model.validate();
  return model;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

HexapodGeometry load_geometry(const std::filesystem::path& path) {
  const Json j = load_json(path, "geometry");
  check_header(j, "hexapose_geometry", path);
  return geometry_from_json(j, path);
}

void save_geometry(const std::filesystem::path& path, const HexapodGeometry& geom) {
  write_text(path, dump(geometry_to_json(geom)));
}

ProjectConfig load_config(const std::filesystem::path& path) {
  const Json j = load_json(path, "config");
  const Header h = check_header(j, "hexapose_config", path);

  ProjectConfig config;
  config.angle_unit = h.angle_unit;
  if (j.contains("geometry_file")) {
    const std::filesystem::path geom_path =
        path.parent_path() / j["geometry_file"].get<std::string>();
    config.geometry = load_geometry(geom_path);
  } else if (j.contains("geometry")) {
    config.geometry = geometry_from_json(j["geometry"], path);
  } else {
    throw ConfigError("'" + path.string() +
                      "': config needs 'geometry_file' or inline 'geometry'");
  }
  if (!j.contains("thermal")) {
    throw ConfigError("'" + path.string() + "': config needs a 'thermal' block");
  }
  config.thermal = thermal_from_json(j["thermal"], path.string());
  if (j.contains("metrology")) {
    const Json& m = j["metrology"];
    config.metrology.points_per_ball = m.value("points_per_ball", 9);
    config.metrology.congruence_tol_mm =
        m.value("congruence_tol_mm", kDefaultCongruenceTolMm);
    if (config.metrology.points_per_ball < 4) {
      throw ConfigError("'" + path.string() + "': points_per_ball must be >= 4");
    }
    if (!(config.metrology.congruence_tol_mm > 0.0)) {
      throw ConfigError("'" + path.string() + "': congruence_tol_mm must be positive");
    }
  }
  config.reference_time_budget_s = j.value("reference_time_budget_s", 300.0);
  return config;
}

MeasurementSession load_session(const std::filesystem::path& path) {
  const Json j = load_json(path, "session");
  const Header h = check_header(j, "hexapose_session", path);

  MeasurementSession session;
  session.origin_frame_in_m =
      pose_from_json(j.at("origin_frame"), h.angle_unit, "origin_frame");
  session.reference_pose_commanded = pose_from_json(
      j.at("reference_pose_commanded"), h.angle_unit, "reference_pose_commanded");
  session.target_pose_commanded = pose_from_json(
      j.at("target_pose_commanded"), h.angle_unit, "target_pose_commanded");
  if (!j.contains("records") || !j["records"].is_array()) {
    throw ConfigError("'" + path.string() + "': session needs a 'records' array");
  }
  for (const Json& rec : j["records"]) {
    SessionRecord r;
    r.role = record_role_from_string(rec.value("role", ""));
    if (!rec.contains("timestamp_s") || !rec["timestamp_s"].is_number()) {
      throw ConfigError("'" + path.string() + "': record without timestamp_s");
    }
    r.timestamp_s = rec["timestamp_s"].get<double>();
    r.frame_pose_in_m = pose_from_json(rec.at("frame"), h.angle_unit, "record frame");
    if (rec.contains("leg_temperatures_c")) {
      r.leg_temperatures_c = vec6_from_json(rec["leg_temperatures_c"],
                                            "leg_temperatures_c");
    }
    session.records.push_back(std::move(r));
  }
  session.validate();
  return session;
}

void save_session(const std::filesystem::path& path,
                  const MeasurementSession& session, const std::string& angle_unit) {
  check_angle_unit(angle_unit);
  Json j = header("hexapose_session", angle_unit);
  j["origin_frame"] = pose_to_json(session.origin_frame_in_m, angle_unit);
  j["reference_pose_commanded"] =
      pose_to_json(session.reference_pose_commanded, angle_unit);
  j["target_pose_commanded"] =
      pose_to_json(session.target_pose_commanded, angle_unit);
  Json records = Json::array();
  for (const auto& r : session.records) {
    Json rec;
    rec["role"] = to_string(r.role);
    rec["timestamp_s"] = r.timestamp_s;
    rec["frame"] = pose_to_json(r.frame_pose_in_m, angle_unit);
    if (r.leg_temperatures_c) {
      rec["leg_temperatures_c"] = vec6_to_json(*r.leg_temperatures_c);
    }
    records.push_back(std::move(rec));
  }
  j["records"] = std::move(records);
  write_text(path, dump(j));
}

ScenarioConfig load_scenario(const std::filesystem::path& path,
                             const ProjectConfig& config) {
  const Json j = load_json(path, "scenario");
  const Header h = check_header(j, "hexapose_scenario", path);

  ScenarioConfig cfg;
  cfg.geometry = config.geometry;
  cfg.thermal = config.thermal;
  cfg.points_per_ball = config.metrology.points_per_ball;
  cfg.congruence_tol_mm = config.metrology.congruence_tol_mm;

  if (!j.contains("ball_layout_mm") || !j["ball_layout_mm"].is_array() ||
      j["ball_layout_mm"].size() != 3) {
    throw ConfigError("'" + path.string() + "': scenario needs 3 'ball_layout_mm' centers");
  }
  for (size_t i = 0; i < 3; ++i) {
    cfg.ball_layout.balls_in_platform[i] =
        point_from_json(j["ball_layout_mm"][i], "ball_layout_mm");
  }
  cfg.ball_radius_mm = j.value("ball_radius_mm", 12.7);
  cfg.points_per_ball = j.value("points_per_ball", cfg.points_per_ball);
  cfg.probe_noise_sigma_mm = j.value("probe_noise_sigma_mm", 1e-3);
  cfg.origin_in_m = pose_from_json(j.at("origin_in_m"), h.angle_unit, "origin_in_m");
  cfg.origin_time_s = j.value("origin_time_s", 0.0);
  cfg.reference_pose =
      pose_from_json(j.at("reference_pose"), h.angle_unit, "reference_pose");
  cfg.target_pose = pose_from_json(j.at("target_pose"), h.angle_unit, "target_pose");
  cfg.ambient_temp_c = j.value("ambient_temp_c", 20.0);
  cfg.air_temp_offset_c = j.value("air_temp_offset_c", 0.0);
  cfg.rng_seed = j.value("rng_seed", std::uint64_t{0});

  if (!j.contains("trial_plan") || !j["trial_plan"].is_array() ||
      j["trial_plan"].empty()) {
    throw ConfigError("'" + path.string() + "': scenario needs a non-empty 'trial_plan'");
  }
  for (const Json& step_json : j["trial_plan"]) {
    TrialStep step;
    step.role = record_role_from_string(step_json.value("role", ""));
    if (!step_json.contains("dwell_s") || !step_json["dwell_s"].is_number()) {
      throw ConfigError("'" + path.string() + "': trial step without dwell_s");
    }
    step.dwell_s = step_json["dwell_s"].get<double>();
    cfg.trial_plan.push_back(step);
  }

  if (!j.contains("heating_schedule")) {
    throw ConfigError("'" + path.string() + "': scenario needs a 'heating_schedule'");
  }
  const Json& sched = j["heating_schedule"];
  if (!sched.contains("times_s") || !sched.contains("leg_dt_k") ||
      !sched["times_s"].is_array() || !sched["leg_dt_k"].is_array() ||
      sched["times_s"].size() != sched["leg_dt_k"].size()) {
    throw ConfigError("'" + path.string() +
                      "': heating_schedule needs matching 'times_s' and 'leg_dt_k'");
  }
  for (size_t i = 0; i < sched["times_s"].size(); ++i) {
    if (!sched["times_s"][i].is_number()) {
      throw ConfigError("'" + path.string() + "': non-numeric schedule time");
    }
    cfg.heating.times_s.push_back(sched["times_s"][i].get<double>());
    cfg.heating.leg_dt_k.push_back(
        vec6_from_json(sched["leg_dt_k"][i], "heating_schedule.leg_dt_k"));
  }

  if (j.contains("repeatability")) {
    const Json& rep = j["repeatability"];
    cfg.repeatability.enabled = rep.value("enabled", false);
    cfg.repeatability.sigma_translation_mm = rep.value("sigma_translation_mm", 0.5e-3);
    cfg.repeatability.sigma_rotation_rad = rep.value("sigma_rotation_rad", 2.5e-6);
  }

  cfg.validate();
  return cfg;
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
  const Json j = load_json(path, "ground truth");
  const Header h = check_header(j, "hexapose_ground_truth", path);
  GroundTruth truth;
  truth.anchor_time_s = j.value("anchor_time_s", 0.0);
  truth.origin_pose_machine = pose_from_json(j.at("origin_pose_machine"),
                                             h.angle_unit, "origin_pose_machine");
  for (const Json& rec : j.at("records")) {
    TruthRecord r;
    r.timestamp_s = rec.at("timestamp_s").get<double>();
    r.role = record_role_from_string(rec.value("role", ""));
    r.pose_t1_equivalent =
        pose_from_json(rec.at("pose_t1_equivalent"), h.angle_unit, "pose_t1_equivalent");
    r.pose_actual = pose_from_json(rec.at("pose_actual"), h.angle_unit, "pose_actual");
    r.leg_dt_k = vec6_from_json(rec.at("leg_dt_k"), "leg_dt_k");
    r.leg_lengths_mm = vec6_from_json(rec.at("leg_lengths_mm"), "leg_lengths_mm");
    truth.records.push_back(std::move(r));
  }
  return truth;
}

void save_ground_truth(const std::filesystem::path& path, const GroundTruth& truth,
                       const std::string& angle_unit) {
  check_angle_unit(angle_unit);
  Json j = header("hexapose_ground_truth", angle_unit);
  j["anchor_time_s"] = truth.anchor_time_s;
  j["origin_pose_machine"] = pose_to_json(truth.origin_pose_machine, angle_unit);
  Json records = Json::array();
  for (const auto& r : truth.records) {
    Json rec;
    rec["timestamp_s"] = r.timestamp_s;
    rec["role"] = to_string(r.role);
    rec["pose_t1_equivalent"] = pose_to_json(r.pose_t1_equivalent, angle_unit);
    rec["pose_actual"] = pose_to_json(r.pose_actual, angle_unit);
    rec["leg_dt_k"] = vec6_to_json(r.leg_dt_k);
    rec["leg_lengths_mm"] = vec6_to_json(r.leg_lengths_mm);
    records.push_back(std::move(rec));
  }
  j["records"] = std::move(records);
  write_text(path, dump(j));
}

ComparisonReport load_report(const std::filesystem::path& path) {
  const Json j = load_json(path, "report");
  const Header h = check_header(j, "hexapose_report", path);
  ComparisonReport report;
  for (const Json& row : j.at("trials")) {
    TrialResult r;
    r.trial = row.at("trial").get<int>();
    r.mean_leg_dt_k = row.at("mean_leg_dt_k").get<double>();
    r.air_temp_c = row.at("air_temp_c").get<double>();
    r.conventional = pose_from_json(row.at("conventional"), h.angle_unit, "conventional");
    r.decoupled = pose_from_json(row.at("decoupled"), h.angle_unit, "decoupled");
    r.truth_t1 = pose_from_json(row.at("truth_t1"), h.angle_unit, "truth_t1");
    report.trials.push_back(r);
  }
  const Json& s = j.at("summary");
  auto pose_vec = [&](const char* key) {
    return pose_from_json(s.at(key), h.angle_unit, key).to_vector();
  };
  report.summary.conventional_range = pose_vec("conventional_range");
  report.summary.decoupled_range = pose_vec("decoupled_range");
  report.summary.conventional_slope = pose_vec("conventional_slope_per_trial");
  report.summary.decoupled_slope = pose_vec("decoupled_slope_per_trial");
  report.summary.conventional_tz_dt_correlation =
      s.at("conventional_tz_dt_correlation").get<double>();
  return report;
}

void save_report(const std::filesystem::path& path, const ComparisonReport& report,
                 const std::string& angle_unit) {
  check_angle_unit(angle_unit);
  Json j = header("hexapose_report", angle_unit);
  Json trials = Json::array();
  for (const auto& r : report.trials) {
    Json row;
    row["trial"] = r.trial;
    row["mean_leg_dt_k"] = r.mean_leg_dt_k;
    row["air_temp_c"] = r.air_temp_c;
    row["conventional"] = pose_to_json(r.conventional, angle_unit);
    row["decoupled"] = pose_to_json(r.decoupled, angle_unit);
    row["truth_t1"] = pose_to_json(r.truth_t1, angle_unit);
    trials.push_back(std::move(row));
  }
  j["trials"] = std::move(trials);
  Json summary;
  summary["conventional_range"] =
      pose_to_json(Pose6::from_vector(report.summary.conventional_range), angle_unit);
  summary["decoupled_range"] =
      pose_to_json(Pose6::from_vector(report.summary.decoupled_range), angle_unit);
  summary["conventional_slope_per_trial"] =
      pose_to_json(Pose6::from_vector(report.summary.conventional_slope), angle_unit);
  summary["decoupled_slope_per_trial"] =
      pose_to_json(Pose6::from_vector(report.summary.decoupled_slope), angle_unit);
  summary["conventional_tz_dt_correlation"] =
      report.summary.conventional_tz_dt_correlation;
  j["summary"] = std::move(summary);
  write_text(path, dump(j));
}

void save_estimates(const std::filesystem::path& path,
                    const MeasurementSession& session,
                    const std::vector<TargetEstimates>& estimates,
                    const std::string& angle_unit) {
  check_angle_unit(angle_unit);
  Json j = header("hexapose_estimates", angle_unit);
  j["reference_pose_commanded"] =
      pose_to_json(session.reference_pose_commanded, angle_unit);
  j["target_pose_commanded"] =
      pose_to_json(session.target_pose_commanded, angle_unit);
  Json rows = Json::array();
  for (const auto& te : estimates) {
    Json row;
    row["record_index"] = te.record_index;
    row["timestamp_s"] = te.timestamp_s;
    row["conventional"] = pose_to_json(te.conventional.pose, angle_unit);
    row["decoupled"] = pose_to_json(te.decoupled.pose, angle_unit);
    if (te.decoupled.diagnostics) {
      const auto& d = *te.decoupled.diagnostics;
      Json diag;
      diag["dq_ref_mm"] = vec6_to_json(d.dq_ref_mm);
      diag["dq_target_mm"] = vec6_to_json(d.dq_target_mm);
      diag["implied_dt_k"] = vec6_to_json(d.implied_dt_k);
      diag["ref_t1_index"] = d.ref_t1_index;
      diag["ref_t2_index"] = d.ref_t2_index;
      row["diagnostics"] = std::move(diag);
    }
    rows.push_back(std::move(row));
  }
  j["targets"] = std::move(rows);
  write_text(path, dump(j));
}

EstimatesFile load_estimates(const std::filesystem::path& path) {
  const Json j = load_json(path, "estimates");
  const Header h = check_header(j, "hexapose_estimates", path);
  EstimatesFile file;
  file.reference_pose_commanded = pose_from_json(j.at("reference_pose_commanded"),
                                                 h.angle_unit, "reference_pose_commanded");
  file.target_pose_commanded = pose_from_json(j.at("target_pose_commanded"),
                                              h.angle_unit, "target_pose_commanded");
  for (const Json& row : j.at("targets")) {
    EstimateRow r;
    r.record_index = row.at("record_index").get<size_t>();
    r.timestamp_s = row.at("timestamp_s").get<double>();
    r.conventional = pose_from_json(row.at("conventional"), h.angle_unit, "conventional");
    r.decoupled = pose_from_json(row.at("decoupled"), h.angle_unit, "decoupled");
    if (row.contains("diagnostics")) {
      const Json& d = row["diagnostics"];
      r.dq_ref_mm = vec6_from_json(d.at("dq_ref_mm"), "dq_ref_mm");
      r.dq_target_mm = vec6_from_json(d.at("dq_target_mm"), "dq_target_mm");
      r.implied_dt_k = vec6_from_json(d.at("implied_dt_k"), "implied_dt_k");
      r.ref_t1_index = d.at("ref_t1_index").get<size_t>();
      r.ref_t2_index = d.at("ref_t2_index").get<size_t>();
    }
    file.rows.push_back(r);
  }
  return file;
}

std::vector<Point3> load_probe_points(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open probe point file '" + path.string() + "'");

  std::vector<Point3> points;
  bool units_declared = false;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      std::string comment = line.substr(hash + 1);
      std::istringstream cs(comment);
      std::string word;
      std::vector<std::string> words;
      while (cs >> word) words.push_back(word);
      if (words.size() >= 2 && (words[0] == "units:" || words[0] == "units")) {
        if (words.back() != "mm") {
          throw ConfigError("'" + path.string() + "': probe points must be in mm");
        }
        units_declared = true;
      }
      line = line.substr(0, hash);
    }
    for (char& c : line) {
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    }
    std::istringstream ls(line);
    double x, y, z;
    if (!(ls >> x)) continue;  // blank line
    if (!(ls >> y >> z)) {
      throw ConfigError("'" + path.string() + "' line " + std::to_string(line_no) +
                        ": expected three coordinates");
    }
    double extra;
    if (ls >> extra) {
      throw ConfigError("'" + path.string() + "' line " + std::to_string(line_no) +
                        ": more than three columns");
    }
    points.emplace_back(x, y, z);
  }
  if (!units_declared) {
    throw ConfigError("'" + path.string() +
                      "': missing '# units: mm' header; units must be explicit");
  }
  if (points.size() < 4) {
    throw ConfigError("'" + path.string() + "': need at least 4 probe points, found " +
                      std::to_string(points.size()));
  }
  return points;
}

void write_report_csv(std::ostream& out, const ComparisonReport& report,
                      const std::string& angle_unit) {
  check_angle_unit(angle_unit);
  const char* names[6] = {"tx", "ty", "tz", "rx", "ry", "rz"};
  out << "# length unit: mm, angle unit: " << angle_unit
      << ", temperatures: K (rises) / C (air)\n";
  out << "trial,method,component,value,mean_leg_dt_k,air_temp_c\n";
  char buffer[64];
  auto emit = [&](int trial, const char* method, const Pose6& pose,
                  double mean_dt, double air) {
    const Vec6 v = pose.to_vector();
    for (int c = 0; c < 6; ++c) {
      const double value = c < 3 ? v[c] : angle_from_rad(v[c], angle_unit);
      std::snprintf(buffer, sizeof(buffer), "%.12g", value);
      out << trial << ',' << method << ',' << names[c] << ',' << buffer << ',';
      std::snprintf(buffer, sizeof(buffer), "%.12g", mean_dt);
      out << buffer << ',';
      std::snprintf(buffer, sizeof(buffer), "%.12g", air);
      out << buffer << '\n';
    }
  };
  for (const auto& r : report.trials) {
    emit(r.trial, "conventional", r.conventional, r.mean_leg_dt_k, r.air_temp_c);
    emit(r.trial, "decoupled", r.decoupled, r.mean_leg_dt_k, r.air_temp_c);
    emit(r.trial, "truth", r.truth_t1, r.mean_leg_dt_k, r.air_temp_c);
  }
}

void save_report_csv(const std::filesystem::path& path,
                     const ComparisonReport& report, const std::string& angle_unit) {
  std::ostringstream ss;
  write_report_csv(ss, report, angle_unit);
  write_text(path, ss.str());
}

}  // namespace hexapose
