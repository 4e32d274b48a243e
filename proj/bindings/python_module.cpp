#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "hexapose/io.hpp"
#include "hexapose/rng.hpp"

namespace py = pybind11;
using namespace hexapose;

namespace {

using Mat63 = Eigen::Matrix<double, 6, 3>;
using Mat33 = Eigen::Matrix<double, 3, 3>;

Mat63 joints_to_matrix(const std::array<Point3, 6>& joints) {
  Mat63 m;
  for (int i = 0; i < 6; ++i) m.row(i) = joints[i].transpose();
  return m;
}

std::array<Point3, 6> joints_from_matrix(const Mat63& m) {
  std::array<Point3, 6> joints;
  for (int i = 0; i < 6; ++i) joints[i] = m.row(i).transpose();
  return joints;
}

std::array<Point3, 3> centers_from_matrix(const Mat33& m) {
  return {m.row(0).transpose(), m.row(1).transpose(), m.row(2).transpose()};
}

Mat33 centers_to_matrix(const std::array<Point3, 3>& c) {
  Mat33 m;
  for (int i = 0; i < 3; ++i) m.row(i) = c[i].transpose();
  return m;
}

std::string pose_repr(const Pose6& p) {
  std::ostringstream ss;
  ss << "Pose6(tx=" << p.tx << ", ty=" << p.ty << ", tz=" << p.tz
     << ", rx=" << p.rx << ", ry=" << p.ry << ", rz=" << p.rz << ")";
  return ss.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Thermal-deflection-decoupled 6-DOF pose measurement for hexapods";

  // ---- errors ---------------------------------------------------------
  auto base = py::register_exception<Error>(m, "HexaposeError");
  py::register_exception<GimbalLock>(m, "GimbalLockError", base);
  py::register_exception<DegenerateGeometry>(m, "DegenerateGeometryError", base);
  py::register_exception<NoConvergence>(m, "NoConvergenceError", base);
  py::register_exception<SanityBound>(m, "SanityBoundError", base);
  py::register_exception<NonPositiveSegment>(m, "NonPositiveSegmentError", base);
  py::register_exception<DegeneratePoints>(m, "DegeneratePointsError", base);
  py::register_exception<CollinearBalls>(m, "CollinearBallsError", base);
  py::register_exception<ShapeMismatch>(m, "ShapeMismatchError", base);
  py::register_exception<MissingTarget>(m, "MissingTargetError", base);
  py::register_exception<MissingReference>(m, "MissingReferenceError", base);
  py::register_exception<ScheduleGap>(m, "ScheduleGapError", base);
  py::register_exception<ConfigError>(m, "ConfigParseError", base);
  py::register_exception<IoError>(m, "OutputIoError", base);

  // ---- core geometry --------------------------------------------------
  py::class_<Pose6>(m, "Pose6",
                    "6-DOF pose: tx/ty/tz in mm, rx/ry/rz in rad (fixed-XYZ)")
      .def(py::init<>())
      .def(py::init<double, double, double, double, double, double>(),
           py::arg("tx") = 0.0, py::arg("ty") = 0.0, py::arg("tz") = 0.0,
           py::arg("rx") = 0.0, py::arg("ry") = 0.0, py::arg("rz") = 0.0)
      .def_readwrite("tx", &Pose6::tx)
      .def_readwrite("ty", &Pose6::ty)
      .def_readwrite("tz", &Pose6::tz)
      .def_readwrite("rx", &Pose6::rx)
      .def_readwrite("ry", &Pose6::ry)
      .def_readwrite("rz", &Pose6::rz)
      .def("to_vector", &Pose6::to_vector)
      .def_static("from_vector", &Pose6::from_vector, py::arg("v"))
      .def("__repr__", &pose_repr);

  py::class_<Transform3D>(m, "Transform3D")
      .def(py::init<>())
      .def(py::init([](const Mat33& rotation, const Point3& translation) {
             return Transform3D{rotation, translation};
           }),
           py::arg("rotation"), py::arg("translation"))
      .def_readwrite("rotation", &Transform3D::rotation)
      .def_readwrite("translation", &Transform3D::translation)
      .def_static("identity", &Transform3D::identity)
      .def("apply", &Transform3D::apply, py::arg("point"))
      .def("is_rigid", &Transform3D::is_rigid, py::arg("tol") = 1e-12);

  m.def("pose_to_transform", &pose_to_transform, py::arg("pose"));
  m.def("transform_to_pose", &transform_to_pose, py::arg("transform"));
  m.def("compose", &compose, py::arg("a"), py::arg("b"));
  m.def("inverse", &inverse, py::arg("transform"));
  m.def("deg2rad", &deg2rad, py::arg("deg"));
  m.def("rad2deg", &rad2deg, py::arg("rad"));

  // ---- kinematics -----------------------------------------------------
  py::class_<HexapodGeometry>(m, "HexapodGeometry")
      .def(py::init([](const Mat63& base, const Mat63& platform) {
             HexapodGeometry g{joints_from_matrix(base), joints_from_matrix(platform)};
             g.validate();
             return g;
           }),
           py::arg("base_joints"), py::arg("platform_joints"),
           "Joint centers as 6x3 matrices (mm); base in frame O, platform in S")
      .def_property(
          "base_joints",
          [](const HexapodGeometry& g) { return joints_to_matrix(g.base_joints); },
          [](HexapodGeometry& g, const Mat63& m) { g.base_joints = joints_from_matrix(m); })
      .def_property(
          "platform_joints",
          [](const HexapodGeometry& g) { return joints_to_matrix(g.platform_joints); },
          [](HexapodGeometry& g, const Mat63& m) {
            g.platform_joints = joints_from_matrix(m);
          })
      .def("validate", &HexapodGeometry::validate);

  m.def("make_symmetric_geometry", &make_symmetric_geometry,
        py::arg("base_radius_mm") = 250.0, py::arg("platform_radius_mm") = 150.0,
        py::arg("zero_pose_leg_length_mm") = 500.0,
        py::arg("base_half_angle_deg") = 15.0,
        py::arg("platform_half_angle_deg") = 15.0);

  m.def("igm", &igm, py::arg("geometry"), py::arg("pose"),
        "Leg lengths of a pose (inverse geometric model)");
  m.def("leg_jacobian", &leg_jacobian, py::arg("geometry"), py::arg("pose"));

  py::class_<FgmOptions>(m, "FgmOptions")
      .def(py::init<>())
      .def_readwrite("max_iterations", &FgmOptions::max_iterations)
      .def_readwrite("tolerance_mm", &FgmOptions::tolerance_mm)
      .def_readwrite("max_condition", &FgmOptions::max_condition)
      .def_readwrite("max_step_halvings", &FgmOptions::max_step_halvings);

  m.def("fgm", &fgm, py::arg("geometry"), py::arg("leg_lengths"),
        py::arg("initial_guess"), py::arg("options") = FgmOptions{},
        "Pose matching the leg lengths (forward geometric model)");

  // ---- thermal model ----------------------------------------------------
  py::class_<LegThermalModel>(m, "LegThermalModel")
      .def(py::init<>())
      .def_static("uniform", &LegThermalModel::uniform,
                  py::arg("alpha_al_per_k") = kDefaultAlphaAluminiumPerK,
                  py::arg("alpha_st_per_k") = kDefaultAlphaSteelPerK,
                  py::arg("l_al_mm") = 200.0)
      .def_readwrite("alpha_al", &LegThermalModel::alpha_al)
      .def_readwrite("alpha_st", &LegThermalModel::alpha_st)
      .def_readwrite("l_al", &LegThermalModel::l_al)
      .def("steel_length", &LegThermalModel::steel_length, py::arg("leg_lengths"))
      .def("sensitivity_mm_per_k", &LegThermalModel::sensitivity_mm_per_k,
           py::arg("leg_lengths"))
      .def("validate", &LegThermalModel::validate);

  m.def("reference_deflection", &reference_deflection, py::arg("q_ref_t1"),
        py::arg("q_ref_t2"));
  m.def("scale_deflection", &scale_deflection, py::arg("model"), py::arg("dq_ref"),
        py::arg("q_ref"), py::arg("q_meas"));
  m.def("implied_leg_temperature_rise", &implied_leg_temperature_rise,
        py::arg("model"), py::arg("dq_ref"), py::arg("q_ref"));

  // ---- metrology --------------------------------------------------------
  py::class_<SphereFit>(m, "SphereFit")
      .def_readonly("center", &SphereFit::center)
      .def_readonly("radius_mm", &SphereFit::radius_mm)
      .def_readonly("rms_residual_mm", &SphereFit::rms_residual_mm)
      .def_readonly("iterations", &SphereFit::iterations);

  m.def(
      "fit_sphere",
      [](const Eigen::MatrixX3d& points, std::optional<double> nominal_radius_mm) {
        std::vector<Point3> pts(static_cast<size_t>(points.rows()));
        for (Eigen::Index i = 0; i < points.rows(); ++i) {
          pts[static_cast<size_t>(i)] = points.row(i).transpose();
        }
        SphereFitOptions options;
        options.nominal_radius_mm = nominal_radius_mm;
        return fit_sphere(pts, options);
      },
      py::arg("points"), py::arg("nominal_radius_mm") = std::nullopt,
      "Least-squares sphere through an Nx3 array of probe points");

  py::class_<BallPlateRelation>(m, "BallPlateRelation")
      .def(py::init([](const Mat33& balls) {
             BallPlateRelation rel{centers_from_matrix(balls)};
             rel.validate();
             return rel;
           }),
           py::arg("balls_in_platform"))
      .def_property(
          "balls_in_platform",
          [](const BallPlateRelation& r) { return centers_to_matrix(r.balls_in_platform); },
          [](BallPlateRelation& r, const Mat33& m) {
            r.balls_in_platform = centers_from_matrix(m);
          })
      .def("validate", &BallPlateRelation::validate);

  m.def(
      "establish_relation",
      [](const Mat33& centers, const Transform3D& platform_frame_in_m) {
        return establish_relation(centers_from_matrix(centers), platform_frame_in_m);
      },
      py::arg("centers_in_m"), py::arg("platform_frame_in_m"));
  m.def(
      "frame_from_balls",
      [](const BallPlateRelation& relation, const Mat33& centers, double tol) {
        return frame_from_balls(relation, centers_from_matrix(centers), tol);
      },
      py::arg("relation"), py::arg("measured_centers_in_m"),
      py::arg("congruence_tol_mm") = kDefaultCongruenceTolMm);

  // ---- sessions and the correction pipeline ------------------------------
  py::enum_<RecordRole>(m, "RecordRole")
      .value("REF_BEFORE", RecordRole::RefBefore)
      .value("TARGET", RecordRole::Target)
      .value("REF_AFTER", RecordRole::RefAfter);

  py::class_<SessionRecord>(m, "SessionRecord")
      .def(py::init<>())
      .def_readwrite("role", &SessionRecord::role)
      .def_readwrite("frame_pose_in_m", &SessionRecord::frame_pose_in_m)
      .def_readwrite("timestamp_s", &SessionRecord::timestamp_s)
      .def_readwrite("leg_temperatures_c", &SessionRecord::leg_temperatures_c)
      .def("frame_in_m", &SessionRecord::frame_in_m);

  py::class_<MeasurementSession>(m, "MeasurementSession")
      .def(py::init<>())
      .def_readwrite("origin_frame_in_m", &MeasurementSession::origin_frame_in_m)
      .def_readwrite("reference_pose_commanded",
                     &MeasurementSession::reference_pose_commanded)
      .def_readwrite("target_pose_commanded",
                     &MeasurementSession::target_pose_commanded)
      .def_readwrite("records", &MeasurementSession::records)
      .def("target_indices", &MeasurementSession::target_indices)
      .def("reference_indices", &MeasurementSession::reference_indices)
      .def("validate", &MeasurementSession::validate);

  m.def("session_warnings", &session_warnings, py::arg("session"),
        py::arg("reference_time_budget_s"));

  py::enum_<EstimateMethod>(m, "EstimateMethod")
      .value("CONVENTIONAL", EstimateMethod::Conventional)
      .value("DECOUPLED", EstimateMethod::Decoupled);

  py::class_<DecoupledDiagnostics>(m, "DecoupledDiagnostics")
      .def_readonly("dq_ref_mm", &DecoupledDiagnostics::dq_ref_mm)
      .def_readonly("dq_target_mm", &DecoupledDiagnostics::dq_target_mm)
      .def_readonly("implied_dt_k", &DecoupledDiagnostics::implied_dt_k)
      .def_readonly("ref_t1_index", &DecoupledDiagnostics::ref_t1_index)
      .def_readonly("ref_t2_index", &DecoupledDiagnostics::ref_t2_index);

  py::class_<PoseEstimate>(m, "PoseEstimate")
      .def_readonly("pose", &PoseEstimate::pose)
      .def_readonly("method", &PoseEstimate::method)
      .def_readonly("diagnostics", &PoseEstimate::diagnostics);

  py::class_<ReferencePair>(m, "ReferencePair")
      .def_readonly("t1_index", &ReferencePair::t1_index)
      .def_readonly("t2_index", &ReferencePair::t2_index);

  m.def("reference_pairs", &reference_pairs, py::arg("session"));
  m.def("conventional_pose",
        py::overload_cast<const MeasurementSession&, size_t>(&conventional_pose),
        py::arg("session"), py::arg("target_record_index"));
  m.def("conventional_pose",
        py::overload_cast<const MeasurementSession&>(&conventional_pose),
        py::arg("session"));
  m.def("decoupled_pose",
        py::overload_cast<const HexapodGeometry&, const LegThermalModel&,
                          const MeasurementSession&, size_t>(&decoupled_pose),
        py::arg("geometry"), py::arg("thermal"), py::arg("session"),
        py::arg("target_record_index"));
  m.def("decoupled_pose",
        py::overload_cast<const HexapodGeometry&, const LegThermalModel&,
                          const MeasurementSession&>(&decoupled_pose),
        py::arg("geometry"), py::arg("thermal"), py::arg("session"));

  py::class_<TargetEstimates>(m, "TargetEstimates")
      .def_readonly("record_index", &TargetEstimates::record_index)
      .def_readonly("timestamp_s", &TargetEstimates::timestamp_s)
      .def_readonly("conventional", &TargetEstimates::conventional)
      .def_readonly("decoupled", &TargetEstimates::decoupled);

  m.def("process_session", &process_session, py::arg("geometry"), py::arg("thermal"),
        py::arg("session"));

  // ---- simulator ----------------------------------------------------------
  py::class_<HeatingSchedule>(m, "HeatingSchedule")
      .def(py::init<>())
      .def_readwrite("times_s", &HeatingSchedule::times_s)
      .def_readwrite("leg_dt_k", &HeatingSchedule::leg_dt_k)
      .def("at", &HeatingSchedule::at, py::arg("time_s"))
      .def("validate", &HeatingSchedule::validate);

  py::class_<TrialStep>(m, "TrialStep")
      .def(py::init<>())
      .def(py::init([](RecordRole role, double dwell_s) {
             return TrialStep{role, dwell_s};
           }),
           py::arg("role"), py::arg("dwell_s"))
      .def_readwrite("role", &TrialStep::role)
      .def_readwrite("dwell_s", &TrialStep::dwell_s);

  py::class_<RepeatabilityModel>(m, "RepeatabilityModel")
      .def(py::init<>())
      .def_readwrite("enabled", &RepeatabilityModel::enabled)
      .def_readwrite("sigma_translation_mm", &RepeatabilityModel::sigma_translation_mm)
      .def_readwrite("sigma_rotation_rad", &RepeatabilityModel::sigma_rotation_rad);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("geometry", &ScenarioConfig::geometry)
      .def_readwrite("thermal", &ScenarioConfig::thermal)
      .def_readwrite("ball_layout", &ScenarioConfig::ball_layout)
      .def_readwrite("ball_radius_mm", &ScenarioConfig::ball_radius_mm)
      .def_readwrite("points_per_ball", &ScenarioConfig::points_per_ball)
      .def_readwrite("probe_noise_sigma_mm", &ScenarioConfig::probe_noise_sigma_mm)
      .def_readwrite("congruence_tol_mm", &ScenarioConfig::congruence_tol_mm)
      .def_readwrite("origin_in_m", &ScenarioConfig::origin_in_m)
      .def_readwrite("origin_time_s", &ScenarioConfig::origin_time_s)
      .def_readwrite("reference_pose", &ScenarioConfig::reference_pose)
      .def_readwrite("target_pose", &ScenarioConfig::target_pose)
      .def_readwrite("trial_plan", &ScenarioConfig::trial_plan)
      .def_readwrite("heating", &ScenarioConfig::heating)
      .def_readwrite("ambient_temp_c", &ScenarioConfig::ambient_temp_c)
      .def_readwrite("air_temp_offset_c", &ScenarioConfig::air_temp_offset_c)
      .def_readwrite("repeatability", &ScenarioConfig::repeatability)
      .def_readwrite("rng_seed", &ScenarioConfig::rng_seed)
      .def("validate", &ScenarioConfig::validate);

  py::class_<TruthRecord>(m, "TruthRecord")
      .def_readonly("timestamp_s", &TruthRecord::timestamp_s)
      .def_readonly("role", &TruthRecord::role)
      .def_readonly("pose_t1_equivalent", &TruthRecord::pose_t1_equivalent)
      .def_readonly("pose_actual", &TruthRecord::pose_actual)
      .def_readonly("leg_dt_k", &TruthRecord::leg_dt_k)
      .def_readonly("leg_lengths_mm", &TruthRecord::leg_lengths_mm);

  py::class_<GroundTruth>(m, "GroundTruth")
      .def_readonly("anchor_time_s", &GroundTruth::anchor_time_s)
      .def_readonly("origin_pose_machine", &GroundTruth::origin_pose_machine)
      .def_readonly("records", &GroundTruth::records);

  py::class_<SimulatedSession>(m, "SimulatedSession")
      .def_readonly("session", &SimulatedSession::session)
      .def_readonly("truth", &SimulatedSession::truth);

  m.def("simulate_session", &simulate_session, py::arg("scenario"));

  py::class_<TrialResult>(m, "TrialResult")
      .def_readonly("trial", &TrialResult::trial)
      .def_readonly("mean_leg_dt_k", &TrialResult::mean_leg_dt_k)
      .def_readonly("air_temp_c", &TrialResult::air_temp_c)
      .def_readonly("conventional", &TrialResult::conventional)
      .def_readonly("decoupled", &TrialResult::decoupled)
      .def_readonly("truth_t1", &TrialResult::truth_t1);

  py::class_<ComparisonSummary>(m, "ComparisonSummary")
      .def_readonly("conventional_range", &ComparisonSummary::conventional_range)
      .def_readonly("decoupled_range", &ComparisonSummary::decoupled_range)
      .def_readonly("conventional_slope", &ComparisonSummary::conventional_slope)
      .def_readonly("decoupled_slope", &ComparisonSummary::decoupled_slope)
      .def_readonly("conventional_tz_dt_correlation",
                    &ComparisonSummary::conventional_tz_dt_correlation);

  py::class_<ComparisonReport>(m, "ComparisonReport")
      .def_readonly("trials", &ComparisonReport::trials)
      .def_readonly("summary", &ComparisonReport::summary);

  m.def("run_comparison", &run_comparison, py::arg("scenario"));
  m.def("make_default_ball_layout", &make_default_ball_layout,
        py::arg("side_mm") = 150.0, py::arg("height_mm") = 30.0);
  m.def("make_single_trial_scenario", &make_single_trial_scenario,
        py::arg("leg_dt_k"), py::arg("target_pose") = Pose6{},
        py::arg("probe_noise_sigma_mm") = 0.0, py::arg("seed") = 0);
  m.def("make_trial_campaign_scenario", &make_trial_campaign_scenario,
        py::arg("n_trials") = 10, py::arg("probe_noise_sigma_mm") = 1e-3,
        py::arg("seed") = 0,
        py::arg("heating_rate_k_per_trial") =
            (Vec6() << 1.0, 1.3, 0.6, 0.8, 1.4, 1.0).finished());

  // ---- files ---------------------------------------------------------------
  py::class_<MetrologyDefaults>(m, "MetrologyDefaults")
      .def(py::init<>())
      .def_readwrite("points_per_ball", &MetrologyDefaults::points_per_ball)
      .def_readwrite("congruence_tol_mm", &MetrologyDefaults::congruence_tol_mm);

  py::class_<ProjectConfig>(m, "ProjectConfig")
      .def(py::init<>())
      .def_readwrite("geometry", &ProjectConfig::geometry)
      .def_readwrite("thermal", &ProjectConfig::thermal)
      .def_readwrite("metrology", &ProjectConfig::metrology)
      .def_readwrite("angle_unit", &ProjectConfig::angle_unit)
      .def_readwrite("reference_time_budget_s", &ProjectConfig::reference_time_budget_s);

  m.def("load_config", &load_config, py::arg("path"));
  m.def("load_geometry", &load_geometry, py::arg("path"));
  m.def("save_geometry", &save_geometry, py::arg("path"), py::arg("geometry"));
  m.def("load_session", &load_session, py::arg("path"));
  m.def("save_session", &save_session, py::arg("path"), py::arg("session"),
        py::arg("angle_unit") = "deg");
  m.def("load_scenario", &load_scenario, py::arg("path"), py::arg("config"));
  m.def("load_ground_truth", &load_ground_truth, py::arg("path"));
  m.def("save_ground_truth", &save_ground_truth, py::arg("path"), py::arg("truth"),
        py::arg("angle_unit") = "deg");
  m.def("load_report", &load_report, py::arg("path"));
  m.def("save_report", &save_report, py::arg("path"), py::arg("report"),
        py::arg("angle_unit") = "deg");
  m.def("save_estimates", &save_estimates, py::arg("path"), py::arg("session"),
        py::arg("estimates"), py::arg("angle_unit") = "deg");
  m.def("load_probe_points",
        [](const std::filesystem::path& path) {
          const auto points = load_probe_points(path);
          Eigen::MatrixX3d out(static_cast<Eigen::Index>(points.size()), 3);
          for (size_t i = 0; i < points.size(); ++i) {
            out.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
          }
          return out;
        },
        py::arg("path"));
  m.def("save_report_csv", &save_report_csv, py::arg("path"), py::arg("report"),
        py::arg("angle_unit") = "deg");

#ifdef HEXAPOSE_VERSION
  m.attr("__version__") = HEXAPOSE_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
