#include "hexapose/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hexapose/rng.hpp"

namespace hexapose {

Vec6 HeatingSchedule::at(double time_s) const {
  validate();
  constexpr double kEdgeTol = 1e-9;
  if (time_s < times_s.front() - kEdgeTol || time_s > times_s.back() + kEdgeTol) {
    throw ScheduleGap("heating schedule does not cover t=" + std::to_string(time_s) +
                      " s (defined on [" + std::to_string(times_s.front()) + ", " +
                      std::to_string(times_s.back()) + "] s)");
  }
  if (time_s <= times_s.front()) return leg_dt_k.front();
  if (time_s >= times_s.back()) return leg_dt_k.back();
  const auto upper = std::upper_bound(times_s.begin(), times_s.end(), time_s);
  const size_t hi = static_cast<size_t>(upper - times_s.begin());
  const size_t lo = hi - 1;
  const double w = (time_s - times_s[lo]) / (times_s[hi] - times_s[lo]);
  return (1.0 - w) * leg_dt_k[lo] + w * leg_dt_k[hi];
}

void HeatingSchedule::validate() const {
  if (times_s.empty() || times_s.size() != leg_dt_k.size()) {
    throw ConfigError("heating schedule: need matching, non-empty knot arrays");
  }
  for (size_t i = 1; i < times_s.size(); ++i) {
    if (!(times_s[i] > times_s[i - 1])) {
      throw ConfigError("heating schedule: knot times must be strictly increasing");
    }
  }
}

void ScenarioConfig::validate() const {
  geometry.validate();
  thermal.validate();
  ball_layout.validate();
  heating.validate();
  if (!(ball_radius_mm > 0.0)) throw ConfigError("scenario: ball radius must be positive");
  if (points_per_ball < 4) throw ConfigError("scenario: need at least 4 points per ball");
  if (probe_noise_sigma_mm < 0.0) throw ConfigError("scenario: negative probe noise");
  if (trial_plan.empty()) throw ConfigError("scenario: empty trial plan");
  if (!origin_in_m.all_finite() || !reference_pose.all_finite() ||
      !target_pose.all_finite()) {
    throw ConfigError("scenario: non-finite pose");
  }
  for (const auto& step : trial_plan) {
    if (!(step.dwell_s > 0.0)) throw ConfigError("scenario: dwell times must be positive");
  }
}

namespace {

/// Probe directions: Fibonacci spiral over a 75 deg cap around +Z, the way a
/// top-mounted ball is reachable by a touch probe.
std::vector<Point3> probe_pattern(int n_points) {
  std::vector<Point3> dirs;
  dirs.reserve(static_cast<size_t>(n_points));
  const double cos_max = std::cos(deg2rad(75.0));
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int m = 0; m < n_points; ++m) {
    const double frac = n_points == 1 ? 0.0 : static_cast<double>(m) / (n_points - 1);
    const double cz = 1.0 - frac * (1.0 - cos_max);
    const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
    const double az = golden * m;
    dirs.emplace_back(sz * std::cos(az), sz * std::sin(az), cz);
  }
  return dirs;
}

struct MeasuredFrame {
  Pose6 frame_pose_in_m;  // via balls, with probe noise
  Pose6 pose_machine;     // true pose in the machine frame (after repeatability)
};

/// One virtual measurement: true state, ball probing, sphere fits, frame fit.
MeasuredFrame measure(const ScenarioConfig& cfg, const Transform3D& machine_in_m,
                      const Pose6& commanded, double time_s, Rng rng) {
  const Vec6 dt = cfg.heating.at(time_s);
  const LegLengths q_nominal = igm(cfg.geometry, commanded);
  const LegLengths q_hot =
      q_nominal + cfg.thermal.sensitivity_mm_per_k(q_nominal).cwiseProduct(dt);
  Pose6 pose_machine = fgm(cfg.geometry, q_hot, commanded);

  if (cfg.repeatability.enabled) {
    pose_machine.tx += cfg.repeatability.sigma_translation_mm * rng.normal();
    pose_machine.ty += cfg.repeatability.sigma_translation_mm * rng.normal();
    pose_machine.tz += cfg.repeatability.sigma_translation_mm * rng.normal();
    pose_machine.rx += cfg.repeatability.sigma_rotation_rad * rng.normal();
    pose_machine.ry += cfg.repeatability.sigma_rotation_rad * rng.normal();
    pose_machine.rz += cfg.repeatability.sigma_rotation_rad * rng.normal();
  } else {
    for (int i = 0; i < 6; ++i) rng.normal();  // keep streams aligned
  }

  const Transform3D frame_in_m =
      compose(machine_in_m, pose_to_transform(pose_machine));

  const auto dirs = probe_pattern(cfg.points_per_ball);
  std::array<Point3, 3> fitted_centers;
  SphereFitOptions fit_options;
  fit_options.nominal_radius_mm = cfg.ball_radius_mm;
  std::vector<Point3> points(dirs.size());
  for (size_t ball = 0; ball < 3; ++ball) {
    const Point3 center = frame_in_m.apply(cfg.ball_layout.balls_in_platform[ball]);
    for (size_t m = 0; m < dirs.size(); ++m) {
      points[m] = center + cfg.ball_radius_mm * dirs[m] +
                  cfg.probe_noise_sigma_mm * rng.normal3();
    }
    fitted_centers[ball] = fit_sphere(points, fit_options).center;
  }

  MeasuredFrame out;
  out.pose_machine = pose_machine;
  out.frame_pose_in_m = transform_to_pose(
      frame_from_balls(cfg.ball_layout, fitted_centers, cfg.congruence_tol_mm));
  return out;
}

}  // namespace

SimulatedSession simulate_session(const ScenarioConfig& cfg) {
  cfg.validate();
  const Transform3D machine_in_m = pose_to_transform(cfg.origin_in_m);

  // Record instants; the anchor is the first reference measurement.
  std::vector<double> times;
  double t = cfg.origin_time_s;
  for (const auto& step : cfg.trial_plan) {
    t += step.dwell_s;
    times.push_back(t);
  }
  double anchor_time = cfg.origin_time_s;
  for (size_t i = 0; i < cfg.trial_plan.size(); ++i) {
    if (is_reference(cfg.trial_plan[i].role)) {
      anchor_time = times[i];
      break;
    }
  }

  SimulatedSession out;
  out.truth.anchor_time_s = anchor_time;
  const Vec6 dt_anchor = cfg.heating.at(anchor_time);

  // Origin frame: platform measured at zero pose at the session start.
  const MeasuredFrame origin = measure(cfg, machine_in_m, Pose6{}, cfg.origin_time_s,
                                       Rng::substream(cfg.rng_seed, 0));
  out.session.origin_frame_in_m = origin.frame_pose_in_m;
  out.truth.origin_pose_machine = origin.pose_machine;
  const Transform3D true_origin_inv = inverse(pose_to_transform(origin.pose_machine));

  out.session.reference_pose_commanded = cfg.reference_pose;
  out.session.target_pose_commanded = cfg.target_pose;

  for (size_t i = 0; i < cfg.trial_plan.size(); ++i) {
    const auto& step = cfg.trial_plan[i];
    const Pose6& commanded =
        step.role == RecordRole::Target ? cfg.target_pose : cfg.reference_pose;
    const MeasuredFrame mf = measure(cfg, machine_in_m, commanded, times[i],
                                     Rng::substream(cfg.rng_seed, i + 1));

    SessionRecord record;
    record.role = step.role;
    record.timestamp_s = times[i];
    record.frame_pose_in_m = mf.frame_pose_in_m;
    const Vec6 dt = cfg.heating.at(times[i]);
    record.leg_temperatures_c = Vec6((dt.array() + cfg.ambient_temp_c).matrix());
    out.session.records.push_back(record);

    TruthRecord truth;
    truth.timestamp_s = times[i];
    truth.role = step.role;
    truth.leg_dt_k = dt;
    const LegLengths q_nominal = igm(cfg.geometry, commanded);
    const Vec6 sensitivity = cfg.thermal.sensitivity_mm_per_k(q_nominal);
    truth.leg_lengths_mm = q_nominal + sensitivity.cwiseProduct(dt);
    truth.pose_actual = transform_to_pose(
        compose(true_origin_inv, pose_to_transform(mf.pose_machine)));
    const LegLengths q_t1 = q_nominal + sensitivity.cwiseProduct(dt_anchor);
    const Pose6 pose_t1_machine = fgm(cfg.geometry, q_t1, commanded);
    truth.pose_t1_equivalent = transform_to_pose(
        compose(true_origin_inv, pose_to_transform(pose_t1_machine)));
    out.truth.records.push_back(truth);
  }
  return out;
}

namespace {

double ols_slope(const std::vector<double>& y) {
  const double n = static_cast<double>(y.size());
  if (y.size() < 2) return 0.0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < y.size(); ++i) {
    const double x = static_cast<double>(i + 1);
    sx += x;
    sy += y[i];
    sxx += x * x;
    sxy += x * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const size_t n = a.size();
  if (n < 2) return 0.0;
  double ma = 0.0, mb = 0.0;
  for (size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double cab = 0.0, caa = 0.0, cbb = 0.0;
  for (size_t i = 0; i < n; ++i) {
    cab += (a[i] - ma) * (b[i] - mb);
    caa += (a[i] - ma) * (a[i] - ma);
    cbb += (b[i] - mb) * (b[i] - mb);
  }
  if (caa <= 0.0 || cbb <= 0.0) return 0.0;
  return cab / std::sqrt(caa * cbb);
}

}  // namespace

ComparisonReport run_comparison(const ScenarioConfig& cfg) {
  const SimulatedSession sim = simulate_session(cfg);
  const auto targets = sim.session.target_indices();
  if (targets.empty()) {
    throw MissingTarget("run_comparison: trial plan contains no target step");
  }

  ComparisonReport report;
  std::vector<double> tz_conv, mean_dt;
  std::array<std::vector<double>, 6> conv_series, dec_series;

  int trial = 0;
  for (size_t target : targets) {
    ++trial;
    TrialResult row;
    row.trial = trial;
    row.conventional = conventional_pose(sim.session, target).pose;
    row.decoupled =
        decoupled_pose(cfg.geometry, cfg.thermal, sim.session, target).pose;
    row.truth_t1 = sim.truth.records[target].pose_t1_equivalent;
    row.mean_leg_dt_k = sim.truth.records[target].leg_dt_k.mean();
    row.air_temp_c = cfg.ambient_temp_c + cfg.air_temp_offset_c;
    report.trials.push_back(row);

    const Vec6 conv = row.conventional.to_vector();
    const Vec6 dec = row.decoupled.to_vector();
    for (int c = 0; c < 6; ++c) {
      conv_series[c].push_back(conv[c]);
      dec_series[c].push_back(dec[c]);
    }
    tz_conv.push_back(conv[2]);
    mean_dt.push_back(row.mean_leg_dt_k);
  }

  for (int c = 0; c < 6; ++c) {
    const auto [conv_min, conv_max] =
        std::minmax_element(conv_series[c].begin(), conv_series[c].end());
    const auto [dec_min, dec_max] =
        std::minmax_element(dec_series[c].begin(), dec_series[c].end());
    report.summary.conventional_range[c] = *conv_max - *conv_min;
    report.summary.decoupled_range[c] = *dec_max - *dec_min;
    report.summary.conventional_slope[c] = ols_slope(conv_series[c]);
    report.summary.decoupled_slope[c] = ols_slope(dec_series[c]);
  }
  report.summary.conventional_tz_dt_correlation = pearson(tz_conv, mean_dt);
  return report;
}

BallPlateRelation make_default_ball_layout(double side_mm, double height_mm) {
  const double circumradius = side_mm / std::sqrt(3.0);
  BallPlateRelation layout;
  for (int i = 0; i < 3; ++i) {
    const double az = deg2rad(90.0 + 120.0 * i);
    layout.balls_in_platform[i] =
        Point3(circumradius * std::cos(az), circumradius * std::sin(az), height_mm);
  }
  layout.validate();
  return layout;
}

namespace {

ScenarioConfig base_scenario() {
  ScenarioConfig cfg;
  cfg.geometry = make_symmetric_geometry();
  cfg.thermal = LegThermalModel::uniform();
  cfg.ball_layout = make_default_ball_layout();
  // A deliberately non-trivial CMM placement so frame bookkeeping bugs show up.
  cfg.origin_in_m = Pose6{850.0, 620.0, -410.0, 0.0, 0.0, deg2rad(30.0)};
  cfg.reference_pose = Pose6{0.0, 0.0, -40.0, 0.0, 0.0, 0.0};
  cfg.target_pose = Pose6{};  // zero pose
  return cfg;
}

}  // namespace

ScenarioConfig make_single_trial_scenario(const Vec6& leg_dt_k,
                                          const Pose6& target_pose,
                                          double probe_noise_sigma_mm,
                                          std::uint64_t seed) {
  ScenarioConfig cfg = base_scenario();
  cfg.target_pose = target_pose;
  cfg.probe_noise_sigma_mm = probe_noise_sigma_mm;
  cfg.rng_seed = seed;
  cfg.trial_plan = {{RecordRole::RefBefore, 30.0},
                    {RecordRole::Target, 60.0},
                    {RecordRole::RefAfter, 30.0}};
  // Flat at zero through the anchor, ramp, then flat across target and
  // trailing reference.
  cfg.heating.times_s = {0.0, 30.0, 85.0, 200.0};
  cfg.heating.leg_dt_k = {Vec6::Zero(), Vec6::Zero(), leg_dt_k, leg_dt_k};
  return cfg;
}

ScenarioConfig make_trial_campaign_scenario(int n_trials,
                                            double probe_noise_sigma_mm,
                                            std::uint64_t seed,
                                            const Vec6& heating_rate_k_per_trial) {
  if (n_trials < 1) throw ConfigError("campaign needs at least one trial");
  ScenarioConfig cfg = base_scenario();
  cfg.probe_noise_sigma_mm = probe_noise_sigma_mm;
  cfg.rng_seed = seed;
  cfg.air_temp_offset_c = 0.5;

  cfg.trial_plan = {{RecordRole::RefBefore, 30.0}};
  cfg.heating.times_s = {0.0, 30.0};
  cfg.heating.leg_dt_k = {Vec6::Zero(), Vec6::Zero()};
  double t = 30.0;
  for (int k = 1; k <= n_trials; ++k) {
    const Vec6 level = static_cast<double>(k) * heating_rate_k_per_trial;
    cfg.trial_plan.push_back({RecordRole::Target, 60.0});
    cfg.trial_plan.push_back({RecordRole::RefAfter, 30.0});
    // Heat between trials, hold during the target/reference pair.
    cfg.heating.times_s.push_back(t + 60.0);
    cfg.heating.leg_dt_k.push_back(level);
    cfg.heating.times_s.push_back(t + 90.0);
    cfg.heating.leg_dt_k.push_back(level);
    t += 90.0;
  }
  return cfg;
}

}  // namespace hexapose
