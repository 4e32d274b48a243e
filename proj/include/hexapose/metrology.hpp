#pragma once

#include <array>
#include <optional>
#include <span>

#include "hexapose/geometry.hpp"

namespace hexapose {

struct SphereFit {
  Point3 center = Point3::Zero();  // mm, in the measurement frame
  double radius_mm = 0.0;
  double rms_residual_mm = 0.0;    // RMS of |p - center| - radius
  int iterations = 0;
};

struct SphereFitOptions {
  /// Prior radius used to seed the refinement (e.g. the calibrated ball size).
  std::optional<double> nominal_radius_mm;
  int max_iterations = 100;
  double step_tolerance_mm = 1e-12;
};

/// Least-squares sphere through probe points: linear (algebraic) fit for the
/// starting values, then Gauss-Newton on the geometric distance residuals.
/// Needs at least 4 non-coplanar points.
/// Throws DegeneratePoints and NoConvergence.
SphereFit fit_sphere(std::span<const Point3> points,
                     const SphereFitOptions& options = {});

/// Ball centers expressed in the platform frame; fixed for a given platform.
struct BallPlateRelation {
  std::array<Point3, 3> balls_in_platform;

  /// Throws CollinearBalls when the triangle area is not above 1 mm^2.
  void validate() const;
};

constexpr double kMinBallTriangleAreaMm2 = 1.0;

/// Default bound on edge-length disagreement when re-identifying the balls.
constexpr double kDefaultCongruenceTolMm = 0.025;

/// One-time bootstrap: store the measured ball centers in platform-frame
/// coordinates, given the platform frame measured in the same CMM frame.
BallPlateRelation establish_relation(const std::array<Point3, 3>& centers_in_m,
                                     const Transform3D& platform_frame_in_m);

/// Recover the platform frame from freshly measured ball centers: least-squares
/// rigid registration (centroid alignment + SVD rotation with det +1 guard) of
/// the stored ball positions onto the measured ones.
/// Throws ShapeMismatch when the measured triangle is not congruent with the
/// stored one within congruence_tol_mm, and CollinearBalls on degenerate input.
Transform3D frame_from_balls(const BallPlateRelation& relation,
                             const std::array<Point3, 3>& measured_centers_in_m,
                             double congruence_tol_mm = kDefaultCongruenceTolMm);

}  // namespace hexapose
