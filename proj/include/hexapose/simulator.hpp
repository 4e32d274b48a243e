#pragma once

#include <cstdint>
#include <vector>

#include "hexapose/metrology.hpp"
#include "hexapose/pipeline.hpp"

namespace hexapose {

/// Per-leg temperature rise over time, piecewise linear between knots.
struct HeatingSchedule {
  std::vector<double> times_s;  // strictly increasing
  std::vector<Vec6> leg_dt_k;   // one entry per knot

  /// Interpolated per-leg rise at `time_s`.
  /// Throws ScheduleGap outside [times_s.front(), times_s.back()].
  Vec6 at(double time_s) const;

  void validate() const;
};

struct TrialStep {
  RecordRole role = RecordRole::Target;
  double dwell_s = 60.0;  // time since the previous measurement
};

/// Mechanical repeatability of the hexapod, optionally injected as an
/// independent pose perturbation per measurement. Off by default so thermal
/// effects can be studied in isolation.
struct RepeatabilityModel {
  bool enabled = false;
  double sigma_translation_mm = 0.5e-3;
  double sigma_rotation_rad = 2.5e-6;
};

/// Everything needed to synthesize one measurement campaign.
struct ScenarioConfig {
  HexapodGeometry geometry;
  LegThermalModel thermal = LegThermalModel::uniform();
  BallPlateRelation ball_layout;
  double ball_radius_mm = 12.7;
  int points_per_ball = 9;
  double probe_noise_sigma_mm = 1e-3;  // per coordinate; MPE_p/2 by default
  double congruence_tol_mm = kDefaultCongruenceTolMm;

  Pose6 origin_in_m;        // placement of the machine frame in the CMM volume
  double origin_time_s = 0.0;
  Pose6 reference_pose;     // commanded R
  Pose6 target_pose;        // commanded S
  std::vector<TrialStep> trial_plan;
  HeatingSchedule heating;

  double ambient_temp_c = 20.0;
  double air_temp_offset_c = 0.0;  // reported air channel = ambient + offset
  RepeatabilityModel repeatability;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct TruthRecord {
  double timestamp_s = 0.0;
  RecordRole role = RecordRole::Target;
  /// Pose the platform would have at this record's commanded lengths with the
  /// legs at the anchor-time (t1) temperatures, relative to the true origin
  /// frame. This is what the decoupled estimate should recover.
  Pose6 pose_t1_equivalent;
  /// Actual (deflected) pose at measurement time, relative to the true origin
  /// frame. This is what a perfect conventional measurement would see.
  Pose6 pose_actual;
  Vec6 leg_dt_k;         // temperature rise at the measurement instant
  Vec6 leg_lengths_mm;   // actual (expanded) leg lengths
};

struct GroundTruth {
  double anchor_time_s = 0.0;        // instant anchoring temperature set t1
  Pose6 origin_pose_machine;         // true platform pose at origin time, machine frame
  std::vector<TruthRecord> records;  // aligned 1:1 with session records
};

struct SimulatedSession {
  MeasurementSession session;
  GroundTruth truth;
};

/// Synthesize a session: commanded pose -> nominal leg lengths (IGM) ->
/// per-leg thermal expansion at the scheduled temperature -> true deflected
/// pose (FGM) -> ball centers -> noisy probe points -> sphere fits -> frame.
/// Deterministic for a given config and seed.
SimulatedSession simulate_session(const ScenarioConfig& config);

struct TrialResult {
  int trial = 0;
  double mean_leg_dt_k = 0.0;
  double air_temp_c = 0.0;
  Pose6 conventional;
  Pose6 decoupled;
  Pose6 truth_t1;
};

struct ComparisonSummary {
  Vec6 conventional_range;      // max-min per pose component across trials
  Vec6 decoupled_range;
  Vec6 conventional_slope;      // least-squares slope per trial index
  Vec6 decoupled_slope;
  double conventional_tz_dt_correlation = 0.0;
};

struct ComparisonReport {
  std::vector<TrialResult> trials;
  ComparisonSummary summary;
};

/// Simulate and post-process with both methods, one row per target.
ComparisonReport run_comparison(const ScenarioConfig& config);

/// Equilateral ball triangle (side length as given) mounted above the
/// platform center.
BallPlateRelation make_default_ball_layout(double side_mm = 150.0,
                                           double height_mm = 30.0);

/// Single-trial scenario: origin and first reference at zero temperature
/// rise, then a ramp to `leg_dt_k` that is flat across the target and its
/// trailing reference, so the injected deflection is exactly recoverable.
ScenarioConfig make_single_trial_scenario(const Vec6& leg_dt_k,
                                          const Pose6& target_pose = Pose6{},
                                          double probe_noise_sigma_mm = 0.0,
                                          std::uint64_t seed = 0);

/// Multi-trial campaign in the usual layout R, (S, R) x n_trials with the
/// per-leg heating rates applied stepwise between trials (flat across each
/// trial's measurements). Default rates heat legs 2 and 5 hardest and legs 3
/// and 4 least, with leg 5 above leg 3.
ScenarioConfig make_trial_campaign_scenario(
    int n_trials = 10, double probe_noise_sigma_mm = 1e-3,
    std::uint64_t seed = 0,
    const Vec6& heating_rate_k_per_trial = (Vec6() << 1.0, 1.3, 0.6, 0.8, 1.4, 1.0).finished());

}  // namespace hexapose
