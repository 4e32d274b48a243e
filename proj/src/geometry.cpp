#include "hexapose/geometry.hpp"

#include <cmath>

namespace hexapose {

bool Pose6::all_finite() const {
  return std::isfinite(tx) && std::isfinite(ty) && std::isfinite(tz) &&
         std::isfinite(rx) && std::isfinite(ry) && std::isfinite(rz);
}

bool Transform3D::is_rigid(double tol) const {
  const Eigen::Matrix3d gram = rotation.transpose() * rotation;
  const double ortho_err = (gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  const double det_err = std::abs(rotation.determinant() - 1.0);
  return ortho_err <= tol && det_err <= tol && translation.allFinite();
}

Transform3D pose_to_transform(const Pose6& pose) {
  const double cx = std::cos(pose.rx), sx = std::sin(pose.rx);
  const double cy = std::cos(pose.ry), sy = std::sin(pose.ry);
  const double cz = std::cos(pose.rz), sz = std::sin(pose.rz);

  Transform3D t;
  // Rz * Ry * Rx expanded.
  t.rotation << cy * cz, sx * sy * cz - cx * sz, cx * sy * cz + sx * sz,
                cy * sz, sx * sy * sz + cx * cz, cx * sy * sz - sx * cz,
                -sy,     sx * cy,                cx * cy;
  t.translation << pose.tx, pose.ty, pose.tz;
  return t;
}

Pose6 transform_to_pose(const Transform3D& t) {
  const Eigen::Matrix3d& r = t.rotation;
  // cos(ry) recovered from the first column; non-negative by construction.
  const double cy = std::hypot(r(0, 0), r(1, 0));
  if (cy < kGimbalLockCosTol) {
    throw GimbalLock("transform_to_pose: |cos(ry)| < 1e-6, pose is gimbal-locked");
  }
  Pose6 p;
  p.tx = t.translation.x();
  p.ty = t.translation.y();
  p.tz = t.translation.z();
  p.ry = std::atan2(-r(2, 0), cy);
  p.rx = std::atan2(r(2, 1), r(2, 2));
  p.rz = std::atan2(r(1, 0), r(0, 0));
  return p;
}

Transform3D compose(const Transform3D& a, const Transform3D& b) {
  Transform3D out;
  out.rotation = a.rotation * b.rotation;
  out.translation = a.rotation * b.translation + a.translation;
  return out;
}

Transform3D inverse(const Transform3D& t) {
  Transform3D out;
  out.rotation = t.rotation.transpose();
  out.translation = -(out.rotation * t.translation);
  return out;
}

}  // namespace hexapose
