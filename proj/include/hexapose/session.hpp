#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hexapose/geometry.hpp"

namespace hexapose {

enum class RecordRole { RefBefore, Target, RefAfter };

const char* to_string(RecordRole role);
RecordRole record_role_from_string(const std::string& name);

inline bool is_reference(RecordRole role) { return role != RecordRole::Target; }

/// One measured platform frame. The frame is stored as the pose of the
/// platform frame with respect to the CMM frame M (away from gimbal lock a
/// pose is a lossless encoding of the rigid transform, and it keeps session
/// files readable).
struct SessionRecord {
  RecordRole role = RecordRole::Target;
  Pose6 frame_pose_in_m;
  double timestamp_s = 0.0;
  std::optional<Vec6> leg_temperatures_c;  // diagnostic only

  Transform3D frame_in_m() const { return pose_to_transform(frame_pose_in_m); }
};

/// Ordered record of one measurement campaign: the origin frame O measured at
/// the start, then reference/target frames. All frames live in the CMM frame.
struct MeasurementSession {
  Pose6 origin_frame_in_m;  // O at temperature set t1
  Pose6 reference_pose_commanded;
  Pose6 target_pose_commanded;
  std::vector<SessionRecord> records;

  /// Record indices of all targets, ordered by timestamp.
  std::vector<size_t> target_indices() const;

  /// Record indices of all references (before or after), ordered by timestamp.
  std::vector<size_t> reference_indices() const;

  /// Schema-level invariants: strictly increasing timestamps, at least one
  /// target, every target time-adjacent to a reference, finite poses.
  /// Throws ConfigError.
  void validate() const;
};

/// Advisory check of the "reference measured quickly" assumption: one warning
/// per target whose paired reference is further away in time than the budget.
/// Never throws; an empty result means nothing to flag.
std::vector<std::string> session_warnings(const MeasurementSession& session,
                                          double reference_time_budget_s);

}  // namespace hexapose
