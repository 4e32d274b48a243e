#pragma once

#include "hexapose/geometry.hpp"
#include "hexapose/rng.hpp"

namespace hexapose::test {

/// Random pose inside a workspace box (translations in mm, rotations in rad).
inline Pose6 random_pose(Rng& rng, double t_range_mm, double r_range_rad) {
  auto span = [&](double half) { return (2.0 * rng.uniform() - 1.0) * half; };
  return Pose6{span(t_range_mm), span(t_range_mm), span(t_range_mm),
               span(r_range_rad), span(r_range_rad), span(r_range_rad)};
}

inline double max_abs_diff(const Vec6& a, const Vec6& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline double translation_error_mm(const Pose6& a, const Pose6& b) {
  return (a.to_vector().head<3>() - b.to_vector().head<3>()).cwiseAbs().maxCoeff();
}

inline double rotation_error_rad(const Pose6& a, const Pose6& b) {
  return (a.to_vector().tail<3>() - b.to_vector().tail<3>()).cwiseAbs().maxCoeff();
}

}  // namespace hexapose::test
