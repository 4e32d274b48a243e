#include "hexapose/metrology.hpp"

#include <algorithm>
#include <vector>

#include "doctest.h"
#include "test_helpers.hpp"

using namespace hexapose;
using test::random_pose;

namespace {

// Evenly spread directions over the full sphere (Fibonacci spiral).
std::vector<Point3> fibonacci_sphere(int n) {
  std::vector<Point3> dirs;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    dirs.emplace_back(r * std::cos(golden * i), r * std::sin(golden * i), z);
  }
  return dirs;
}

std::vector<Point3> sphere_points(const Point3& center, double radius, int n) {
  std::vector<Point3> pts;
  for (const auto& d : fibonacci_sphere(n)) pts.push_back(center + radius * d);
  return pts;
}

double percentile(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  const double idx = p * (values.size() - 1);
  const size_t lo = static_cast<size_t>(idx);
  const size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (idx - lo) * (values[hi] - values[lo]);
}

std::array<Point3, 3> circle_balls(double circumradius_mm, double z_mm) {
  std::array<Point3, 3> balls;
  for (int i = 0; i < 3; ++i) {
    const double az = deg2rad(90.0 + 120.0 * i);
    balls[static_cast<size_t>(i)] =
        Point3(circumradius_mm * std::cos(az), circumradius_mm * std::sin(az), z_mm);
  }
  return balls;
}

}  // namespace

TEST_CASE("fit_sphere on exact points") {
  const Point3 center(10.0, 20.0, 30.0);
  const auto pts = sphere_points(center, 12.7, 8);
  const SphereFit fit = fit_sphere(pts);
  CHECK((fit.center - center).norm() < 1e-10);
  CHECK(std::abs(fit.radius_mm - 12.7) < 1e-10);
  CHECK(fit.rms_residual_mm < 1e-10);
}

TEST_CASE("fit_sphere rejects degenerate inputs") {
  std::vector<Point3> coplanar = {Point3(0, 0, 5), Point3(1, 0, 5), Point3(0, 1, 5),
                                  Point3(1, 1, 5), Point3(-3, 2, 5)};
  CHECK_THROWS_AS(fit_sphere(coplanar), DegeneratePoints);

  std::vector<Point3> too_few = {Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0)};
  CHECK_THROWS_AS(fit_sphere(too_few), DegeneratePoints);
}

TEST_CASE("fit_sphere under probe noise recovers the center") {
  const Point3 center(-4.0, 7.5, 111.0);
  const double sigma = 2e-3;
  Rng rng(41);
  std::vector<double> errors;
  for (int draw = 0; draw < 300; ++draw) {
    auto pts = sphere_points(center, 12.7, 25);
    for (auto& p : pts) p += sigma * rng.normal3();
    const SphereFit fit = fit_sphere(pts);
    errors.push_back((fit.center - center).norm());
  }
  CHECK(percentile(errors, 0.95) < 2e-3);
  // residual magnitude should look like the injected noise
  CHECK(percentile(errors, 0.50) < 1.5e-3);
}

TEST_CASE("fit_sphere is invariant to rigid motion") {
  Rng rng(42);
  auto pts = sphere_points(Point3(3, -2, 8), 20.0, 15);
  for (auto& p : pts) p += 1e-3 * rng.normal3();
  const SphereFit base = fit_sphere(pts);

  const Transform3D motion = pose_to_transform(Pose6{40, -16, 9, 0.4, -0.7, 1.1});
  std::vector<Point3> moved;
  for (const auto& p : pts) moved.push_back(motion.apply(p));
  const SphereFit after = fit_sphere(moved);

  CHECK((after.center - motion.apply(base.center)).norm() < 1e-10);
  CHECK(std::abs(after.radius_mm - base.radius_mm) < 1e-10);
  CHECK(std::abs(after.rms_residual_mm - base.rms_residual_mm) < 1e-12);
}

TEST_CASE("establish_relation") {
  const auto balls = circle_balls(86.6, 30.0);

  SUBCASE("identity frame keeps the centers verbatim") {
    const BallPlateRelation rel = establish_relation(balls, Transform3D::identity());
    for (size_t i = 0; i < 3; ++i) {
      CHECK((rel.balls_in_platform[i] - balls[i]).norm() == 0.0);
    }
  }

  SUBCASE("moving centers and frame together changes nothing") {
    const Transform3D frame = pose_to_transform(Pose6{500, 300, -200, 0.1, 0.2, 0.3});
    const BallPlateRelation rel_a = establish_relation(balls, frame);

    const Transform3D motion = pose_to_transform(Pose6{-70, 11, 43, 0.5, -0.3, 0.9});
    std::array<Point3, 3> moved;
    for (size_t i = 0; i < 3; ++i) moved[i] = motion.apply(balls[i]);
    const BallPlateRelation rel_b = establish_relation(moved, compose(motion, frame));

    for (size_t i = 0; i < 3; ++i) {
      CHECK((rel_a.balls_in_platform[i] - rel_b.balls_in_platform[i]).norm() < 1e-12);
    }
  }

  SUBCASE("collinear centers are rejected") {
    const std::array<Point3, 3> collinear = {Point3(0, 0, 0), Point3(10, 0, 0),
                                             Point3(20, 0, 0)};
    CHECK_THROWS_AS(establish_relation(collinear, Transform3D::identity()),
                    CollinearBalls);
  }
}

TEST_CASE("frame_from_balls recovers exact rigid motions") {
  const auto balls = circle_balls(86.6, 30.0);
  const BallPlateRelation rel{balls};

  std::array<Point3, 3> same = balls;
  const Transform3D id = frame_from_balls(rel, same);
  CHECK((id.rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(id.translation.norm() < 1e-13);

  Rng rng(43);
  for (int i = 0; i < 50; ++i) {
    const Transform3D motion = pose_to_transform(random_pose(rng, 400.0, 1.2));
    std::array<Point3, 3> moved;
    for (size_t k = 0; k < 3; ++k) moved[k] = motion.apply(balls[k]);
    const Transform3D recovered = frame_from_balls(rel, moved);
    CHECK((recovered.rotation - motion.rotation).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((recovered.translation - motion.translation).norm() < 1e-12);
  }
}

TEST_CASE("frame_from_balls roundtrip with establish_relation") {
  Rng rng(44);
  const auto balls = circle_balls(120.0, 12.0);
  for (int i = 0; i < 30; ++i) {
    const Transform3D frame = pose_to_transform(random_pose(rng, 300.0, 1.0));
    std::array<Point3, 3> centers_in_m;
    for (size_t k = 0; k < 3; ++k) centers_in_m[k] = frame.apply(balls[k]);
    const BallPlateRelation rel = establish_relation(centers_in_m, frame);
    const Transform3D back = frame_from_balls(rel, centers_in_m);
    CHECK((back.rotation - frame.rotation).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((back.translation - frame.translation).norm() < 1e-12);
  }
}

TEST_CASE("frame_from_balls congruence and degeneracy guards") {
  const auto balls = circle_balls(86.6, 30.0);
  const BallPlateRelation rel{balls};

  std::array<Point3, 3> stretched = balls;
  stretched[0] += Point3(0.1, 0, 0);  // 100 um is way past any probe noise
  CHECK_THROWS_AS(frame_from_balls(rel, stretched), ShapeMismatch);

  // generous tolerance lets the same perturbation through
  CHECK_NOTHROW(frame_from_balls(rel, stretched, 0.5));
}

TEST_CASE("frame_from_balls under center noise") {
  // Balls on a 150 mm circle; 2 um per-coordinate center noise. Per-axis
  // errors stay within a few um / tens of urad.
  const auto balls = circle_balls(150.0, 30.0);
  const BallPlateRelation rel{balls};
  Rng rng(45);
  std::vector<double> terr[3], rerr[3];
  for (int draw = 0; draw < 500; ++draw) {
    std::array<Point3, 3> noisy = balls;
    for (auto& c : noisy) c += 2e-3 * rng.normal3();
    const Transform3D got = frame_from_balls(rel, noisy);
    const Pose6 p = transform_to_pose(got);
    const Vec6 v = p.to_vector();
    for (int k = 0; k < 3; ++k) {
      terr[k].push_back(std::abs(v[k]));
      rerr[k].push_back(std::abs(v[k + 3]));
    }
  }
  for (int k = 0; k < 3; ++k) {
    CHECK(percentile(terr[k], 0.95) < 3e-3);
    CHECK(percentile(rerr[k], 0.95) < 30e-6);
  }
}

TEST_CASE("returned rotation beats a small-angle grid") {
  // Procrustes optimality: no nearby rotation has a lower registration cost.
  const auto balls = circle_balls(86.6, 30.0);
  const BallPlateRelation rel{balls};
  Rng rng(46);

  auto cost = [&](const Eigen::Matrix3d& rot, const std::array<Point3, 3>& meas) {
    Point3 sc = Point3::Zero(), mc = Point3::Zero();
    for (size_t k = 0; k < 3; ++k) {
      sc += rel.balls_in_platform[k];
      mc += meas[k];
    }
    sc /= 3.0;
    mc /= 3.0;
    double acc = 0.0;
    for (size_t k = 0; k < 3; ++k) {
      acc += (meas[k] - mc - rot * (rel.balls_in_platform[k] - sc)).squaredNorm();
    }
    return acc;
  };

  for (int trial = 0; trial < 10; ++trial) {
    std::array<Point3, 3> noisy = balls;
    for (auto& c : noisy) c += 5e-3 * rng.normal3();
    const Transform3D fit = frame_from_balls(rel, noisy);
    const double best = cost(fit.rotation, noisy);
    for (int ax = 0; ax < 3; ++ax) {
      for (double angle : {-2e-4, -5e-5, 5e-5, 2e-4}) {
        Vec6 v = Vec6::Zero();
        v[3 + ax] = angle;
        const Eigen::Matrix3d nudged =
            fit.rotation * pose_to_transform(Pose6::from_vector(v)).rotation;
        CHECK(best <= cost(nudged, noisy) + 1e-15);
      }
    }
  }
}
