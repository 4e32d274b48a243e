#pragma once

#include <array>

#include "hexapose/geometry.hpp"

namespace hexapose {

/// Six leg lengths, mm.
using LegLengths = Vec6;

/// Joint centers of a 6-UPS hexapod. Base joints are expressed in the machine
/// frame O (the platform frame at zero pose), platform joints in the moving
/// platform frame S. Joints are ideal points; a leg length is the
/// center-to-center distance.
struct HexapodGeometry {
  std::array<Point3, 6> base_joints;
  std::array<Point3, 6> platform_joints;

  /// Checks joint separation and that all six legs share one length at the
  /// zero pose (that is how the machine frame O is defined).
  /// Throws DegenerateGeometry.
  void validate() const;
};

/// Legs shorter than this are treated as a base/platform joint collision.
constexpr double kMinLegLengthMm = 1e-6;

/// Zero-pose leg lengths may differ by at most this much in a valid geometry.
constexpr double kZeroPoseLengthTolMm = 1e-9;

/// Six-fold symmetric geometry: three base joint pairs on a circle of
/// `base_radius_mm` with centers 120 deg apart, three platform pairs on a
/// circle of `platform_radius_mm` rotated by 60 deg, and the base plane
/// lowered so every leg has length `zero_pose_leg_length_mm` at zero pose.
///
/// Legs are numbered so that heating legs 2 and 5 more than legs 3 and 4
/// drives the platform toward +X, and heating leg 5 more than leg 3 tilts it
/// toward +Rx.
HexapodGeometry make_symmetric_geometry(double base_radius_mm = 250.0,
                                        double platform_radius_mm = 150.0,
                                        double zero_pose_leg_length_mm = 500.0,
                                        double base_half_angle_deg = 15.0,
                                        double platform_half_angle_deg = 15.0);

/// Inverse geometric model: q_i = |R p_i + t - b_i|.
/// Throws DegenerateGeometry when a leg collapses below kMinLegLengthMm.
LegLengths igm(const HexapodGeometry& geom, const Pose6& pose);

/// Analytic leg-length Jacobian, entry (i,j) = d q_i / d pose_j.
/// Row i is the unit leg vector (translations) and its moment about the
/// platform origin mapped through the Euler-rate basis (rotations).
Mat66 leg_jacobian(const HexapodGeometry& geom, const Pose6& pose);

struct FgmOptions {
  int max_iterations = 50;
  double tolerance_mm = 1e-10;   // on max |igm(pose) - q_target|
  double max_condition = 1e12;   // Jacobian condition limit
  int max_step_halvings = 30;
};

/// Forward geometric model: damped Newton iteration on igm(pose) - q_target,
/// starting from `initial_guess` (the commanded pose in normal use). Returns
/// the solution branch nearest the guess.
/// Throws NoConvergence (iteration budget, stalled damping or near-singular
/// Jacobian) and propagates DegenerateGeometry.
Pose6 fgm(const HexapodGeometry& geom, const LegLengths& q_target,
          const Pose6& initial_guess, const FgmOptions& options = {});

}  // namespace hexapose
