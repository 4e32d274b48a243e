#pragma once

#include <Eigen/Dense>

#include "hexapose/errors.hpp"

namespace hexapose {

/// Measured CMM point, mm.
using Point3 = Eigen::Vector3d;

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat66 = Eigen::Matrix<double, 6, 6>;

constexpr double kPi = 3.141592653589793238462643383279502884;

inline double deg2rad(double deg) { return deg * (kPi / 180.0); }
inline double rad2deg(double rad) { return rad * (180.0 / kPi); }

/// 6-DOF pose: translations in mm, rotations in rad.
///
/// Rotation convention is fixed-axis X-Y-Z (roll-pitch-yaw about the axes of
/// the base frame), i.e. R = Rz(rz) * Ry(ry) * Rx(rx). Angles are kept in
/// radians everywhere inside the toolkit; degrees appear only in files and
/// display output.
struct Pose6 {
  double tx{0.0};
  double ty{0.0};
  double tz{0.0};
  double rx{0.0};
  double ry{0.0};
  double rz{0.0};

  static Pose6 from_vector(const Vec6& v) {
    return Pose6{v[0], v[1], v[2], v[3], v[4], v[5]};
  }

  Vec6 to_vector() const {
    Vec6 v;
    v << tx, ty, tz, rx, ry, rz;
    return v;
  }

  bool all_finite() const;
};

/// Rigid transform: rotation (orthonormal, det +1) plus translation in mm.
struct Transform3D {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static Transform3D identity() { return {}; }

  Point3 apply(const Point3& p) const { return rotation * p + translation; }

  /// True when rotation^T * rotation = I and det = +1 within tol.
  bool is_rigid(double tol = 1e-12) const;
};

/// Build the transform of a pose: R = Rz*Ry*Rx, t = (tx, ty, tz).
Transform3D pose_to_transform(const Pose6& pose);

/// Extract the pose of a rigid transform.
/// Throws GimbalLock when |cos(ry)| < 1e-6.
Pose6 transform_to_pose(const Transform3D& t);

/// a then applied after b: (a*b).apply(p) == a.apply(b.apply(p)).
Transform3D compose(const Transform3D& a, const Transform3D& b);

Transform3D inverse(const Transform3D& t);

/// |cos(ry)| below this means the Euler extraction is ill-conditioned.
constexpr double kGimbalLockCosTol = 1e-6;

}  // namespace hexapose
