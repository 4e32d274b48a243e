#include "hexapose/simulator.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hexapose/io.hpp"
#include "test_helpers.hpp"

using namespace hexapose;

namespace {

std::string file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Pose6 relative_pose(const Pose6& origin_in_m, const Pose6& frame_in_m) {
  return transform_to_pose(
      compose(inverse(pose_to_transform(origin_in_m)), pose_to_transform(frame_in_m)));
}

}  // namespace

TEST_CASE("heating schedule interpolation and gaps") {
  HeatingSchedule sched;
  sched.times_s = {0.0, 10.0, 20.0};
  sched.leg_dt_k = {Vec6::Zero(), Vec6::Constant(2.0), Vec6::Constant(2.0)};

  CHECK(sched.at(0.0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(sched.at(5.0)[0] == doctest::Approx(1.0));
  CHECK(sched.at(20.0)[0] == doctest::Approx(2.0));
  CHECK_THROWS_AS(sched.at(-1.0), ScheduleGap);
  CHECK_THROWS_AS(sched.at(20.5), ScheduleGap);

  HeatingSchedule broken;
  broken.times_s = {0.0, 0.0};
  broken.leg_dt_k = {Vec6::Zero(), Vec6::Zero()};
  CHECK_THROWS_AS(broken.validate(), ConfigError);
}

TEST_CASE("zero heating, zero noise reproduces the commanded frames") {
  const ScenarioConfig cfg =
      make_single_trial_scenario(Vec6::Zero(), Pose6{2, 1, -12, 0, 0, 0});
  const SimulatedSession sim = simulate_session(cfg);

  for (size_t i = 0; i < sim.session.records.size(); ++i) {
    const auto& rec = sim.session.records[i];
    const Pose6 commanded =
        rec.role == RecordRole::Target ? cfg.target_pose : cfg.reference_pose;
    const Pose6 measured = relative_pose(sim.session.origin_frame_in_m,
                                         rec.frame_pose_in_m);
    CHECK(test::translation_error_mm(measured, commanded) < 1e-9);
    CHECK(test::rotation_error_rad(measured, commanded) < 1e-11);
  }
}

TEST_CASE("+1 K uniform expands every leg by 8.2 um") {
  // alpha_al*l_al + alpha_st*(q0-l_al) = 23e-6*200 + 12e-6*300 = 8.2e-3 mm/K
  const ScenarioConfig cfg = make_single_trial_scenario(Vec6::Constant(1.0));
  const SimulatedSession sim = simulate_session(cfg);
  const size_t target = sim.session.target_indices().front();
  const TruthRecord& truth = sim.truth.records[target];

  for (int i = 0; i < 6; ++i) {
    CHECK(truth.leg_lengths_mm[i] == doctest::Approx(500.0 + 8.2e-3).epsilon(1e-12));
  }

  // The Z shift is exactly the FGM response to six equally longer legs.
  const Pose6 oracle =
      fgm(cfg.geometry, Vec6::Constant(500.0 + 8.2e-3), Pose6{});
  CHECK(test::translation_error_mm(truth.pose_actual, oracle) < 1e-9);
  CHECK(truth.pose_actual.tz == doctest::Approx(oracle.tz).epsilon(1e-9));
}

TEST_CASE("uniform heating error is pure Tz by symmetry") {
  const ScenarioConfig cfg = make_single_trial_scenario(Vec6::Constant(2.0));
  const SimulatedSession sim = simulate_session(cfg);
  const Pose6 conv = conventional_pose(sim.session).pose;
  const double tz = std::abs(conv.tz);
  CHECK(tz > 10e-3);
  CHECK(std::abs(conv.tx) < 1e-9 * tz);
  CHECK(std::abs(conv.ty) < 1e-9 * tz);
  CHECK(std::abs(conv.rx) < 1e-9 * tz);
  CHECK(std::abs(conv.ry) < 1e-9 * tz);
  CHECK(std::abs(conv.rz) < 1e-9 * tz);
}

TEST_CASE("ground truth is consistent with the kinematic models") {
  Vec6 dt;
  dt << 0.5, 1.0, 1.5, 2.0, 2.5, 3.0;
  const ScenarioConfig cfg = make_single_trial_scenario(dt);
  const SimulatedSession sim = simulate_session(cfg);

  // Anchor is at zero rise, so the true origin frame is the machine frame and
  // truth poses can be fed straight back into the models.
  for (size_t i = 0; i < sim.truth.records.size(); ++i) {
    const TruthRecord& truth = sim.truth.records[i];
    const LegLengths q = igm(cfg.geometry, truth.pose_actual);
    CHECK(test::max_abs_diff(q, truth.leg_lengths_mm) < 1e-9);
    const Pose6 again = fgm(cfg.geometry, truth.leg_lengths_mm, truth.pose_actual);
    CHECK(test::translation_error_mm(again, truth.pose_actual) < 1e-9);
  }
}

TEST_CASE("identical seeds give byte-identical session files") {
  const ScenarioConfig cfg = make_trial_campaign_scenario(2, 2e-3, 1234);
  const auto dir = std::filesystem::temp_directory_path() / "hexapose_determinism";
  std::filesystem::create_directories(dir);

  save_session(dir / "a.json", simulate_session(cfg).session);
  save_session(dir / "b.json", simulate_session(cfg).session);
  CHECK(file_bytes(dir / "a.json") == file_bytes(dir / "b.json"));

  ScenarioConfig other = cfg;
  other.rng_seed = 4321;
  save_session(dir / "c.json", simulate_session(other).session);
  CHECK(file_bytes(dir / "a.json") != file_bytes(dir / "c.json"));
}

TEST_CASE("decoupled error scales linearly with probe noise") {
  const Vec6 dt = Vec6::Constant(2.0);
  auto rms_error = [&](double sigma_mm) {
    double acc = 0.0;
    const int seeds = 100;
    for (int s = 0; s < seeds; ++s) {
      const ScenarioConfig cfg = make_single_trial_scenario(
          dt, Pose6{}, sigma_mm, static_cast<std::uint64_t>(1000 + s));
      const SimulatedSession sim = simulate_session(cfg);
      const size_t target = sim.session.target_indices().front();
      const PoseEstimate est = decoupled_pose(cfg.geometry, cfg.thermal, sim.session);
      const Vec6 err =
          est.pose.to_vector() - sim.truth.records[target].pose_t1_equivalent.to_vector();
      acc += err.head<3>().squaredNorm();
    }
    return std::sqrt(acc / seeds);
  };

  const double e0 = rms_error(0.0);
  const double e1 = rms_error(1e-3);
  const double e2 = rms_error(2e-3);
  const double e4 = rms_error(4e-3);
  CHECK(e0 < 1e-9);
  CHECK(e2 / e1 == doctest::Approx(2.0).epsilon(0.25));
  CHECK(e4 / e2 == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("frame scatter under probe noise stays near the metrology-only level") {
  // Zero heating, 2 um probe noise. The conventional estimate chains two
  // measured frames (origin and target), so its scatter should sit within a
  // small factor of the single-frame registration error measured directly on
  // the metrology chain with the same probing pattern.
  const double sigma = 2e-3;
  const int seeds = 200;

  const ScenarioConfig proto = make_single_trial_scenario(Vec6::Zero(), Pose6{}, sigma, 0);

  // Metrology-only reference: probe the same layout with the same pattern.
  Rng rng(61);
  std::vector<double> single_frame_err;
  {
    const Transform3D frame = pose_to_transform(proto.origin_in_m);
    SphereFitOptions options;
    options.nominal_radius_mm = proto.ball_radius_mm;
    const double cos_max = std::cos(deg2rad(75.0));
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int s = 0; s < seeds; ++s) {
      std::array<Point3, 3> centers;
      for (size_t ball = 0; ball < 3; ++ball) {
        const Point3 c = frame.apply(proto.ball_layout.balls_in_platform[ball]);
        std::vector<Point3> pts;
        for (int m = 0; m < proto.points_per_ball; ++m) {
          const double frac =
              static_cast<double>(m) / (proto.points_per_ball - 1);
          const double cz = 1.0 - frac * (1.0 - cos_max);
          const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
          pts.push_back(c + proto.ball_radius_mm *
                                Point3(sz * std::cos(golden * m),
                                       sz * std::sin(golden * m), cz) +
                        sigma * rng.normal3());
        }
        centers[ball] = fit_sphere(pts, options).center;
      }
      const Transform3D measured = frame_from_balls(proto.ball_layout, centers);
      single_frame_err.push_back(
          (compose(inverse(frame), measured)).translation.norm());
    }
  }

  std::vector<double> sim_err;
  for (int s = 0; s < seeds; ++s) {
    ScenarioConfig cfg = proto;
    cfg.rng_seed = static_cast<std::uint64_t>(5000 + s);
    const SimulatedSession sim = simulate_session(cfg);
    const Pose6 conv = conventional_pose(sim.session).pose;
    sim_err.push_back(conv.to_vector().head<3>().norm());
  }

  std::sort(single_frame_err.begin(), single_frame_err.end());
  std::sort(sim_err.begin(), sim_err.end());
  const double ref95 = single_frame_err[static_cast<size_t>(0.95 * (seeds - 1))];
  const double sim95 = sim_err[static_cast<size_t>(0.95 * (seeds - 1))];
  // two noisy frames in the chain: at most ~sqrt(2) worse, never better than
  // a lone frame by much
  CHECK(sim95 < 2.5 * ref95);
  CHECK(sim95 > 0.7 * ref95);
}

TEST_CASE("repeatability injection adds mechanical scatter") {
  ScenarioConfig cfg = make_single_trial_scenario(Vec6::Zero(), Pose6{}, 0.0, 31);
  cfg.repeatability.enabled = true;
  const SimulatedSession sim = simulate_session(cfg);
  const Pose6 conv = conventional_pose(sim.session).pose;
  const double err = conv.to_vector().head<3>().norm();
  CHECK(err > 1e-6);   // visibly nonzero
  CHECK(err < 5e-3);   // but at the sub-um repeatability scale

  // still deterministic
  const SimulatedSession again = simulate_session(cfg);
  CHECK(test::max_abs_diff(conventional_pose(again.session).pose.to_vector(),
                           conv.to_vector()) == 0.0);
}

TEST_CASE("run_comparison output") {
  SUBCASE("zero heating: both methods match the truth") {
    ScenarioConfig cfg = make_trial_campaign_scenario(3, 0.0, 5);
    cfg.heating.leg_dt_k.assign(cfg.heating.leg_dt_k.size(), Vec6::Zero());
    const ComparisonReport report = run_comparison(cfg);
    REQUIRE(report.trials.size() == 3);
    for (const auto& row : report.trials) {
      CHECK(test::translation_error_mm(row.conventional, row.truth_t1) < 1e-9);
      CHECK(test::translation_error_mm(row.decoupled, row.truth_t1) < 1e-9);
    }
  }

  SUBCASE("differential ramp: conventional drifts grow, decoupled stays flat") {
    const ComparisonReport report = run_comparison(make_trial_campaign_scenario(10, 0.0, 6));
    REQUIRE(report.trials.size() == 10);
    for (size_t k = 1; k < report.trials.size(); ++k) {
      CHECK(report.trials[k].conventional.tx > report.trials[k - 1].conventional.tx);
      CHECK(report.trials[k].conventional.rx > report.trials[k - 1].conventional.rx);
      CHECK(report.trials[k].conventional.tz > report.trials[k - 1].conventional.tz);
      CHECK(report.trials[k].mean_leg_dt_k > report.trials[k - 1].mean_leg_dt_k);
    }
    CHECK(report.summary.conventional_tz_dt_correlation > 0.999);
    CHECK(report.summary.conventional_slope[0] > 5e-3);
    for (int c = 0; c < 6; ++c) {
      CHECK(std::abs(report.summary.decoupled_slope[c]) < 1e-9);
      CHECK(report.summary.decoupled_range[c] < 1e-8);
    }
  }

  SUBCASE("schedule gaps are reported") {
    ScenarioConfig cfg = make_trial_campaign_scenario(3, 0.0, 7);
    cfg.heating.times_s.pop_back();
    cfg.heating.leg_dt_k.pop_back();
    CHECK_THROWS_AS(simulate_session(cfg), ScheduleGap);
  }
}
