#include "hexapose/kinematics.hpp"

#include <cmath>
#include <string>

namespace hexapose {

void HexapodGeometry::validate() const {
  for (const auto* joints : {&base_joints, &platform_joints}) {
    for (const auto& j : *joints) {
      if (!j.allFinite()) {
        throw DegenerateGeometry("geometry: joint coordinate is not finite");
      }
    }
    for (size_t a = 0; a < 6; ++a) {
      for (size_t b = a + 1; b < 6; ++b) {
        if (((*joints)[a] - (*joints)[b]).norm() <= 1e-6) {
          throw DegenerateGeometry("geometry: joints " + std::to_string(a + 1) +
                                   " and " + std::to_string(b + 1) +
                                   " coincide");
        }
      }
    }
  }
  const LegLengths q0 = igm(*this, Pose6{});
  if (q0.maxCoeff() - q0.minCoeff() > kZeroPoseLengthTolMm) {
    throw DegenerateGeometry(
        "geometry: zero-pose leg lengths are not equal (spread " +
        std::to_string(q0.maxCoeff() - q0.minCoeff()) + " mm)");
  }
}

HexapodGeometry make_symmetric_geometry(double base_radius_mm,
                                        double platform_radius_mm,
                                        double zero_pose_leg_length_mm,
                                        double base_half_angle_deg,
                                        double platform_half_angle_deg) {
  // Horizontal chord between a base joint and its platform joint; identical
  // for all six legs, so the zero-pose lengths come out equal by construction.
  const double span_deg = base_half_angle_deg + platform_half_angle_deg - 60.0;
  const double chord_sq =
      base_radius_mm * base_radius_mm + platform_radius_mm * platform_radius_mm -
      2.0 * base_radius_mm * platform_radius_mm * std::cos(deg2rad(span_deg));
  const double height_sq =
      zero_pose_leg_length_mm * zero_pose_leg_length_mm - chord_sq;
  if (height_sq <= 0.0) {
    throw DegenerateGeometry(
        "make_symmetric_geometry: zero-pose leg length shorter than the "
        "joint-circle chord");
  }
  const double height = std::sqrt(height_sq);

  HexapodGeometry geom;
  for (int label = 0; label < 6; ++label) {
    // Label shift picked so the differential-heating drift signs follow the
    // usual leg numbering (see header).
    const int ph = (label + 4) % 6;
    const double pair_center_deg = 120.0 * (ph / 2);
    const double sign = (ph % 2 == 0) ? -1.0 : 1.0;
    const double base_az = deg2rad(pair_center_deg + sign * base_half_angle_deg);
    const double plat_az =
        deg2rad(pair_center_deg + sign * (60.0 - platform_half_angle_deg));
    geom.base_joints[label] = Point3(base_radius_mm * std::cos(base_az),
                                     base_radius_mm * std::sin(base_az), -height);
    geom.platform_joints[label] = Point3(platform_radius_mm * std::cos(plat_az),
                                         platform_radius_mm * std::sin(plat_az), 0.0);
  }
  geom.validate();
  return geom;
}

LegLengths igm(const HexapodGeometry& geom, const Pose6& pose) {
  const Transform3D t = pose_to_transform(pose);
  LegLengths q;
  for (int i = 0; i < 6; ++i) {
    q[i] = (t.apply(geom.platform_joints[i]) - geom.base_joints[i]).norm();
    if (q[i] < kMinLegLengthMm) {
      throw DegenerateGeometry("igm: leg " + std::to_string(i + 1) +
                               " collapses to zero length");
    }
  }
  return q;
}

Mat66 leg_jacobian(const HexapodGeometry& geom, const Pose6& pose) {
  const Transform3D t = pose_to_transform(pose);
  const double cy = std::cos(pose.ry), sy = std::sin(pose.ry);
  const double cz = std::cos(pose.rz), sz = std::sin(pose.rz);

  // Angular velocity per unit Euler rate for R = Rz*Ry*Rx:
  //   w = ez * drz + Rz ey * dry + Rz Ry ex * drx.
  const Eigen::Vector3d axis_rx(cz * cy, sz * cy, -sy);
  const Eigen::Vector3d axis_ry(-sz, cz, 0.0);
  const Eigen::Vector3d axis_rz(0.0, 0.0, 1.0);

  Mat66 jac;
  for (int i = 0; i < 6; ++i) {
    const Eigen::Vector3d arm = t.rotation * geom.platform_joints[i];
    const Eigen::Vector3d leg = arm + t.translation - geom.base_joints[i];
    const double q = leg.norm();
    if (q < kMinLegLengthMm) {
      throw DegenerateGeometry("leg_jacobian: leg " + std::to_string(i + 1) +
                               " collapses to zero length");
    }
    const Eigen::Vector3d u = leg / q;
    const Eigen::Vector3d moment = arm.cross(u);
    jac.block<1, 3>(i, 0) = u.transpose();
    jac(i, 3) = moment.dot(axis_rx);
    jac(i, 4) = moment.dot(axis_ry);
    jac(i, 5) = moment.dot(axis_rz);
  }
  return jac;
}

Pose6 fgm(const HexapodGeometry& geom, const LegLengths& q_target,
          const Pose6& initial_guess, const FgmOptions& options) {
  if (!q_target.allFinite() || q_target.minCoeff() <= 0.0) {
    throw DegenerateGeometry("fgm: target leg lengths must be positive and finite");
  }

  Vec6 x = initial_guess.to_vector();
  Vec6 residual = igm(geom, Pose6::from_vector(x)) - q_target;

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (residual.cwiseAbs().maxCoeff() < options.tolerance_mm) {
      return Pose6::from_vector(x);
    }

    const Mat66 jac = leg_jacobian(geom, Pose6::from_vector(x));
    Eigen::JacobiSVD<Mat66> svd(jac, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin <= 0.0 || smax / smin > options.max_condition) {
      throw NoConvergence("fgm: Jacobian is near-singular (condition > 1e12)");
    }
    const Vec6 full_step = svd.solve(-residual);

    // Step halving until the residual actually shrinks.
    const double current_norm = residual.norm();
    double scale = 1.0;
    bool accepted = false;
    for (int h = 0; h < options.max_step_halvings; ++h) {
      const Vec6 x_try = x + scale * full_step;
      const Vec6 r_try = igm(geom, Pose6::from_vector(x_try)) - q_target;
      if (r_try.norm() < current_norm) {
        x = x_try;
        residual = r_try;
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) {
      throw NoConvergence("fgm: damped step stalled without residual decrease");
    }
  }

  if (residual.cwiseAbs().maxCoeff() < options.tolerance_mm) {
    return Pose6::from_vector(x);
  }
  throw NoConvergence("fgm: no convergence within iteration budget");
}

}  // namespace hexapose
