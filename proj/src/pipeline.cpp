#include "hexapose/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hexapose {

const char* to_string(RecordRole role) {
  switch (role) {
    case RecordRole::RefBefore: return "ref_before";
    case RecordRole::Target: return "target";
    case RecordRole::RefAfter: return "ref_after";
  }
  return "target";
}

RecordRole record_role_from_string(const std::string& name) {
  if (name == "ref_before") return RecordRole::RefBefore;
  if (name == "target") return RecordRole::Target;
  if (name == "ref_after") return RecordRole::RefAfter;
  throw ConfigError("unknown record role '" + name + "'");
}

namespace {

std::vector<size_t> indices_sorted_by_time(const MeasurementSession& session,
                                           bool want_targets) {
  std::vector<size_t> idx;
  for (size_t i = 0; i < session.records.size(); ++i) {
    if ((session.records[i].role == RecordRole::Target) == want_targets) {
      idx.push_back(i);
    }
  }
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    return session.records[a].timestamp_s < session.records[b].timestamp_s;
  });
  return idx;
}

/// Pose of a measured record frame relative to the measured origin frame.
Pose6 pose_in_origin(const MeasurementSession& session, size_t record_index) {
  const Transform3D origin = pose_to_transform(session.origin_frame_in_m);
  const Transform3D frame = session.records[record_index].frame_in_m();
  return transform_to_pose(compose(inverse(origin), frame));
}

}  // namespace

std::vector<size_t> MeasurementSession::target_indices() const {
  return indices_sorted_by_time(*this, true);
}

std::vector<size_t> MeasurementSession::reference_indices() const {
  return indices_sorted_by_time(*this, false);
}

void MeasurementSession::validate() const {
  if (!origin_frame_in_m.all_finite() || !reference_pose_commanded.all_finite() ||
      !target_pose_commanded.all_finite()) {
    throw ConfigError("session: non-finite pose field");
  }
  if (records.empty()) throw ConfigError("session: no records");
  for (size_t i = 0; i < records.size(); ++i) {
    if (!records[i].frame_pose_in_m.all_finite() ||
        !std::isfinite(records[i].timestamp_s)) {
      throw ConfigError("session: record " + std::to_string(i) +
                        " has non-finite data");
    }
    if (i > 0 && !(records[i].timestamp_s > records[i - 1].timestamp_s)) {
      throw ConfigError("session: timestamps must be strictly increasing");
    }
  }
  const auto targets = target_indices();
  if (targets.empty()) throw ConfigError("session: no target record");
  // Every target must sit right next to a reference measurement in time.
  for (size_t t : targets) {
    const bool prev_ref = t > 0 && is_reference(records[t - 1].role);
    const bool next_ref = t + 1 < records.size() && is_reference(records[t + 1].role);
    if (!prev_ref && !next_ref) {
      throw ConfigError("session: target at t=" +
                        std::to_string(records[t].timestamp_s) +
                        " s has no adjacent reference measurement");
    }
  }
}

std::vector<ReferencePair> reference_pairs(const MeasurementSession& session) {
  bool has_ref_before = false;
  for (const auto& r : session.records) {
    if (r.role == RecordRole::RefBefore) has_ref_before = true;
  }
  if (!has_ref_before) {
    throw MissingReference(
        "session has no ref_before record to anchor temperature set t1");
  }
  const auto refs = session.reference_indices();
  const size_t anchor = refs.front();

  std::vector<ReferencePair> pairs;
  for (size_t target : session.target_indices()) {
    const double t_target = session.records[target].timestamp_s;
    size_t best = anchor;
    double best_gap = std::numeric_limits<double>::infinity();
    for (size_t r : refs) {
      const double gap = std::abs(session.records[r].timestamp_s - t_target);
      // Nearest reference wins; the later one on an exact tie.
      if (gap < best_gap ||
          (gap == best_gap &&
           session.records[r].timestamp_s > session.records[best].timestamp_s)) {
        best = r;
        best_gap = gap;
      }
    }
    pairs.push_back({anchor, best});
  }
  return pairs;
}

PoseEstimate conventional_pose(const MeasurementSession& session,
                               size_t target_record_index) {
  if (target_record_index >= session.records.size() ||
      session.records[target_record_index].role != RecordRole::Target) {
    throw MissingTarget("conventional_pose: record " +
                        std::to_string(target_record_index) + " is not a target");
  }
  PoseEstimate estimate;
  estimate.method = EstimateMethod::Conventional;
  estimate.pose = pose_in_origin(session, target_record_index);
  return estimate;
}

PoseEstimate conventional_pose(const MeasurementSession& session) {
  const auto targets = session.target_indices();
  if (targets.empty()) throw MissingTarget("session has no target record");
  return conventional_pose(session, targets.front());
}

PoseEstimate decoupled_pose(const HexapodGeometry& geom,
                            const LegThermalModel& model,
                            const MeasurementSession& session,
                            size_t target_record_index) {
  if (target_record_index >= session.records.size() ||
      session.records[target_record_index].role != RecordRole::Target) {
    throw MissingTarget("decoupled_pose: record " +
                        std::to_string(target_record_index) + " is not a target");
  }

  const auto targets = session.target_indices();
  const auto pairs = reference_pairs(session);
  size_t pair_index = targets.size();
  for (size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] == target_record_index) pair_index = i;
  }
  if (pair_index == targets.size()) {
    throw MissingTarget("decoupled_pose: target index not found in session");
  }
  const ReferencePair pair = pairs[pair_index];

  const Pose6 ref_t1_pose = pose_in_origin(session, pair.t1_index);
  const Pose6 ref_t2_pose = pose_in_origin(session, pair.t2_index);
  const Pose6 target_pose = pose_in_origin(session, target_record_index);

  const LegLengths q_ref_t1 = igm(geom, ref_t1_pose);
  const LegLengths q_ref_t2 = igm(geom, ref_t2_pose);
  const LegLengths q_target_t2 = igm(geom, target_pose);

  const LegDeflections dq_ref = reference_deflection(q_ref_t1, q_ref_t2);

  // Segment lengths for the rescaling come from the commanded poses: those
  // are the known actuator lengths, and they keep the correction independent
  // of the deflection it is trying to remove.
  const LegLengths q_ref_known = igm(geom, session.reference_pose_commanded);
  const LegLengths q_target_known = igm(geom, session.target_pose_commanded);
  const LegDeflections dq_target =
      scale_deflection(model, dq_ref, q_ref_known, q_target_known);

  const LegLengths q_target_t1 = q_target_t2 - dq_target;

  PoseEstimate estimate;
  estimate.method = EstimateMethod::Decoupled;
  estimate.pose = fgm(geom, q_target_t1, target_pose);
  DecoupledDiagnostics diag;
  diag.dq_ref_mm = dq_ref;
  diag.dq_target_mm = dq_target;
  diag.implied_dt_k = implied_leg_temperature_rise(model, dq_ref, q_ref_known);
  diag.ref_t1_index = pair.t1_index;
  diag.ref_t2_index = pair.t2_index;
  estimate.diagnostics = diag;
  return estimate;
}

PoseEstimate decoupled_pose(const HexapodGeometry& geom,
                            const LegThermalModel& model,
                            const MeasurementSession& session) {
  const auto targets = session.target_indices();
  if (targets.empty()) throw MissingTarget("session has no target record");
  return decoupled_pose(geom, model, session, targets.front());
}

std::vector<TargetEstimates> process_session(const HexapodGeometry& geom,
                                             const LegThermalModel& model,
                                             const MeasurementSession& session) {
  std::vector<TargetEstimates> out;
  for (size_t target : session.target_indices()) {
    TargetEstimates te;
    te.record_index = target;
    te.timestamp_s = session.records[target].timestamp_s;
    te.conventional = conventional_pose(session, target);
    te.decoupled = decoupled_pose(geom, model, session, target);
    out.push_back(std::move(te));
  }
  return out;
}

std::vector<std::string> session_warnings(const MeasurementSession& session,
                                          double reference_time_budget_s) {
  std::vector<std::string> warnings;
  std::vector<ReferencePair> pairs;
  try {
    pairs = reference_pairs(session);
  } catch (const MissingReference&) {
    warnings.push_back("session has no ref_before record; only the conventional "
                       "estimate is possible");
    return warnings;
  }
  const auto targets = session.target_indices();
  for (size_t i = 0; i < targets.size(); ++i) {
    const double gap = std::abs(session.records[targets[i]].timestamp_s -
                                session.records[pairs[i].t2_index].timestamp_s);
    if (gap > reference_time_budget_s) {
      warnings.push_back("target at t=" +
                         std::to_string(session.records[targets[i]].timestamp_s) +
                         " s: nearest reference is " + std::to_string(gap) +
                         " s away (budget " +
                         std::to_string(reference_time_budget_s) +
                         " s); leg temperatures may have drifted in between");
    }
  }
  return warnings;
}

}  // namespace hexapose
