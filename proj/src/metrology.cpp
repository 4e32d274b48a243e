#include "hexapose/metrology.hpp"

#include <cmath>
#include <string>

namespace hexapose {

namespace {

double triangle_area(const std::array<Point3, 3>& p) {
  return 0.5 * (p[1] - p[0]).cross(p[2] - p[0]).norm();
}

double rms_of(std::span<const Point3> points, const Point3& center, double radius) {
  double acc = 0.0;
  for (const auto& p : points) {
    const double r = (p - center).norm() - radius;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(points.size()));
}

/// Linear least-squares sphere (Coope): |p|^2 = 2 c.p + (r^2 - |c|^2).
void algebraic_seed(std::span<const Point3> points, Point3& center, double& radius) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd a(n, 4);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Point3& p = points[static_cast<size_t>(i)];
    a.row(i) << 2.0 * p.x(), 2.0 * p.y(), 2.0 * p.z(), 1.0;
    b[i] = p.squaredNorm();
  }
  const Eigen::Vector4d sol = a.colPivHouseholderQr().solve(b);
  center = sol.head<3>();
  const double r_sq = sol[3] + center.squaredNorm();
  radius = r_sq > 0.0 ? std::sqrt(r_sq) : 0.0;
}

}  // namespace

SphereFit fit_sphere(std::span<const Point3> points, const SphereFitOptions& options) {
  if (points.size() < 4) {
    throw DegeneratePoints("fit_sphere: need at least 4 points, got " +
                           std::to_string(points.size()));
  }
  for (const auto& p : points) {
    if (!p.allFinite()) throw DegeneratePoints("fit_sphere: non-finite point");
  }

  // Coplanarity check: distance of every point to the best-fit plane.
  Point3 centroid = Point3::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());
  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (const auto& p : points) {
    const Point3 d = p - centroid;
    scatter += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(scatter);
  const Point3 normal = eig.eigenvectors().col(0);
  double max_plane_dist = 0.0;
  for (const auto& p : points) {
    max_plane_dist = std::max(max_plane_dist, std::abs(normal.dot(p - centroid)));
  }
  if (max_plane_dist < 1e-9) {
    throw DegeneratePoints("fit_sphere: points are coplanar within 1e-9 mm");
  }

  SphereFit fit;
  algebraic_seed(points, fit.center, fit.radius_mm);
  if (options.nominal_radius_mm) {
    fit.radius_mm = *options.nominal_radius_mm;
  }
  if (!(fit.radius_mm > 0.0)) fit.radius_mm = max_plane_dist;

  // Gauss-Newton on f_i = |p_i - c| - r with step halving, so the geometric
  // residual never increases.
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd jac(n, 4);
  Eigen::VectorXd res(n);
  double cost = 0.0;
  auto eval = [&](const Point3& c, double r, Eigen::VectorXd& out) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = (points[static_cast<size_t>(i)] - c).norm();
      out[i] = d - r;
      acc += out[i] * out[i];
    }
    return acc;
  };
  cost = eval(fit.center, fit.radius_mm, res);

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    fit.iterations = iter;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Point3 d = points[static_cast<size_t>(i)] - fit.center;
      const double dist = d.norm();
      if (dist < 1e-12) {
        throw DegeneratePoints("fit_sphere: a probe point sits at the center");
      }
      jac.row(i) << (-d / dist).transpose(), -1.0;
    }
    const Eigen::Vector4d step =
        (jac.transpose() * jac).ldlt().solve(-jac.transpose() * res);
    if (!step.allFinite()) {
      throw NoConvergence("fit_sphere: normal equations are singular");
    }
    if (step.norm() < options.step_tolerance_mm) break;

    double scale = 1.0;
    bool accepted = false;
    Eigen::VectorXd res_try(n);
    const double previous_cost = cost;
    for (int h = 0; h < 30; ++h) {
      const Point3 c_try = fit.center + scale * step.head<3>();
      const double r_try = fit.radius_mm + scale * step[3];
      const double cost_try = eval(c_try, r_try, res_try);
      if (cost_try < cost) {
        fit.center = c_try;
        fit.radius_mm = r_try;
        res = res_try;
        cost = cost_try;
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) break;                                // numerical floor
    if (previous_cost - cost <= 1e-15 * previous_cost) break;  // no real progress left
    if (iter + 1 == options.max_iterations) {
      throw NoConvergence("fit_sphere: Gauss-Newton iteration budget exhausted");
    }
  }

  if (!(fit.radius_mm > 0.0)) {
    throw DegeneratePoints("fit_sphere: refinement collapsed to a non-positive radius");
  }
  fit.rms_residual_mm = rms_of(points, fit.center, fit.radius_mm);
  return fit;
}

void BallPlateRelation::validate() const {
  for (const auto& b : balls_in_platform) {
    if (!b.allFinite()) throw CollinearBalls("ball layout: non-finite center");
  }
  if (!(triangle_area(balls_in_platform) > kMinBallTriangleAreaMm2)) {
    throw CollinearBalls("ball layout: centers are collinear (triangle area <= 1 mm^2)");
  }
}

BallPlateRelation establish_relation(const std::array<Point3, 3>& centers_in_m,
                                     const Transform3D& platform_frame_in_m) {
  const Transform3D to_platform = inverse(platform_frame_in_m);
  BallPlateRelation relation;
  for (size_t i = 0; i < 3; ++i) {
    relation.balls_in_platform[i] = to_platform.apply(centers_in_m[i]);
  }
  relation.validate();
  return relation;
}

Transform3D frame_from_balls(const BallPlateRelation& relation,
                             const std::array<Point3, 3>& measured_centers_in_m,
                             double congruence_tol_mm) {
  relation.validate();
  if (!(triangle_area(measured_centers_in_m) > kMinBallTriangleAreaMm2)) {
    throw CollinearBalls("frame_from_balls: measured centers are collinear");
  }

  // Rigid-body check: the ball triangle cannot change shape.
  const auto& stored = relation.balls_in_platform;
  for (size_t i = 0; i < 3; ++i) {
    const size_t j = (i + 1) % 3;
    const double stored_edge = (stored[j] - stored[i]).norm();
    const double measured_edge =
        (measured_centers_in_m[j] - measured_centers_in_m[i]).norm();
    if (std::abs(stored_edge - measured_edge) > congruence_tol_mm) {
      throw ShapeMismatch("frame_from_balls: edge " + std::to_string(i + 1) + "-" +
                          std::to_string(j + 1) + " differs by " +
                          std::to_string(std::abs(stored_edge - measured_edge)) +
                          " mm from the stored triangle");
    }
  }

  Point3 stored_centroid = Point3::Zero();
  Point3 measured_centroid = Point3::Zero();
  for (size_t i = 0; i < 3; ++i) {
    stored_centroid += stored[i];
    measured_centroid += measured_centers_in_m[i];
  }
  stored_centroid /= 3.0;
  measured_centroid /= 3.0;

  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
  for (size_t i = 0; i < 3; ++i) {
    covariance += (stored[i] - stored_centroid) *
                  (measured_centers_in_m[i] - measured_centroid).transpose();
  }
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(covariance,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
  flip(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0
                   ? -1.0
                   : 1.0;

  Transform3D frame;
  frame.rotation = svd.matrixV() * flip * svd.matrixU().transpose();
  frame.translation = measured_centroid - frame.rotation * stored_centroid;
  return frame;
}

}  // namespace hexapose
