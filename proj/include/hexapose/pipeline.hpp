#pragma once

#include <optional>
#include <vector>

#include "hexapose/kinematics.hpp"
#include "hexapose/session.hpp"
#include "hexapose/thermal.hpp"

namespace hexapose {

enum class EstimateMethod { Conventional, Decoupled };

struct DecoupledDiagnostics {
  LegDeflections dq_ref_mm;     // deflection seen at the reference pose
  LegDeflections dq_target_mm;  // deflection rescaled to the target pose
  Vec6 implied_dt_k;            // per-leg temperature rise explaining dq_ref
  size_t ref_t1_index = 0;      // record index anchoring temperature set t1
  size_t ref_t2_index = 0;      // record index sampling temperature set t2
};

struct PoseEstimate {
  Pose6 pose;
  EstimateMethod method = EstimateMethod::Conventional;
  std::optional<DecoupledDiagnostics> diagnostics;
};

struct ReferencePair {
  size_t t1_index;
  size_t t2_index;
};

/// Reference pairing rule, one pair per target (in target-time order):
/// t1 is always the session's first reference (it is contemporaneous with the
/// origin measurement); t2 is the reference nearest in time to the target,
/// the later one on a tie.
/// Throws MissingReference when the session has no RefBefore record.
std::vector<ReferencePair> reference_pairs(const MeasurementSession& session);

/// Direct estimate: pose of the target frame relative to the measured origin
/// frame, no thermal processing. Throws MissingTarget.
PoseEstimate conventional_pose(const MeasurementSession& session,
                               size_t target_record_index);
PoseEstimate conventional_pose(const MeasurementSession& session);

/// Thermal-deflection-decoupled estimate:
///  1. poses of R(t1), R(t2) and the target relative to the origin frame,
///  2. leg lengths of each via the IGM,
///  3. reference deflection dq = q_R(t2) - q_R(t1),
///  4. dq rescaled to the target's leg lengths (two-segment model, using the
///     known commanded leg lengths of both poses),
///  5. subtracted from the target's measured leg lengths,
///  6. pose recovered with the FGM, seeded at the uncorrected pose.
/// Throws MissingTarget / MissingReference and propagates kinematics and
/// thermal-model errors.
PoseEstimate decoupled_pose(const HexapodGeometry& geom,
                            const LegThermalModel& model,
                            const MeasurementSession& session,
                            size_t target_record_index);
PoseEstimate decoupled_pose(const HexapodGeometry& geom,
                            const LegThermalModel& model,
                            const MeasurementSession& session);

struct TargetEstimates {
  size_t record_index;
  double timestamp_s;
  PoseEstimate conventional;
  PoseEstimate decoupled;
};

/// Both estimates for every target in the session, in target-time order.
std::vector<TargetEstimates> process_session(const HexapodGeometry& geom,
                                             const LegThermalModel& model,
                                             const MeasurementSession& session);

}  // namespace hexapose
