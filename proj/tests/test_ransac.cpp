#include <cmath>

#include "artic/geometry.hpp"
#include "artic/ransac.hpp"
#include "artic/rng.hpp"
#include "doctest.h"

using namespace artic;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<Point3> plane_points(Rng& g, const Vec3& n, double off, int count, double noise) {
  const Vec3 u = any_orthogonal(n);
  const Vec3 v = n.cross(u);
  std::vector<Point3> pts;
  for (int i = 0; i < count; ++i) {
    const Point3 p = off * n + g.uniform(-0.5, 0.5) * u + g.uniform(-0.5, 0.5) * v;
    pts.push_back(noise > 0 ? Point3(p + g.normal() * noise * n) : p);
  }
  return pts;
}

double angle_to(const Vec3& a, const Vec3& b) {
  return std::acos(std::min(1.0, std::abs(a.normalized().dot(b.normalized()))));
}

}  // namespace

TEST_CASE("exact plane yields a full consensus with zero residual") {
  Rng g(1);
  const auto pts = plane_points(g, Vec3(0, 0, 1), 1.0, 100, 0.0);
  RansacParams params;
  params.seed = 5;
  const PlaneFit fit = ransac_plane(pts, params, Exec::serial);
  CHECK(fit.inlier_indices.size() == 100);
  CHECK(fit.inlier_rmse <= 1e-12);
  CHECK((fit.plane.normal - Vec3(0, 0, -1)).norm() <= 1e-9);
  CHECK(fit.plane.offset == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("20 percent outliers do not move the plane") {
  Rng g(2);
  auto pts = plane_points(g, Vec3(0, 0, 1), 1.0, 80, 0.0);
  for (int i = 0; i < 20; ++i)
    pts.push_back({g.uniform(-1.0, 1.0), g.uniform(-1.0, 1.0), g.uniform(-1.0, 1.0) + 3.0});
  RansacParams params;
  params.inlier_threshold = 0.005;
  params.seed = 9;
  const PlaneFit fit = ransac_plane(pts, params, Exec::serial);
  CHECK(fit.inlier_indices.size() >= 78);
  CHECK(angle_to(fit.plane.normal, Vec3(0, 0, 1)) <= kPi / 180.0);
}

TEST_CASE("two equal planes: the winner is one of them, never a blend") {
  Rng g(3);
  auto pts = plane_points(g, Vec3(0, 0, 1), 1.0, 50, 0.0);
  const auto side = plane_points(g, Vec3(1, 0, 0), 0.2, 50, 0.0);
  pts.insert(pts.end(), side.begin(), side.end());
  RansacParams params;
  params.inlier_threshold = 0.01;
  params.seed = 17;
  const PlaneFit fit = ransac_plane(pts, params, Exec::serial);
  CHECK(fit.inlier_indices.size() >= 48);
  const double to_a = angle_to(fit.plane.normal, Vec3(0, 0, 1));
  const double to_b = angle_to(fit.plane.normal, Vec3(1, 0, 0));
  CHECK(std::min(to_a, to_b) <= 2.0 * kPi / 180.0);
}

TEST_CASE("same seed reproduces the fit bit for bit, serial or parallel") {
  Rng g(4);
  auto pts = plane_points(g, Vec3(0.3, -0.2, 0.93).normalized(), 0.7, 120, 0.002);
  for (int i = 0; i < 30; ++i)
    pts.push_back({g.uniform(-2.0, 2.0), g.uniform(-2.0, 2.0), g.uniform(-2.0, 2.0)});
  RansacParams params;
  params.seed = 1234;
  const PlaneFit a = ransac_plane(pts, params, Exec::serial);
  const PlaneFit b = ransac_plane(pts, params, Exec::serial);
  const PlaneFit c = ransac_plane(pts, params, Exec::parallel);
  CHECK(a.plane.normal == b.plane.normal);
  CHECK(a.plane.offset == b.plane.offset);
  CHECK(a.inlier_indices == b.inlier_indices);
  CHECK(a.inlier_rmse == b.inlier_rmse);
  CHECK(a.hypothesis_index == b.hypothesis_index);
  CHECK(a.plane.normal == c.plane.normal);
  CHECK(a.plane.offset == c.plane.offset);
  CHECK(a.inlier_indices == c.inlier_indices);
  CHECK(a.inlier_rmse == c.inlier_rmse);
  CHECK(a.hypothesis_index == c.hypothesis_index);
}

TEST_CASE("reported inliers actually sit within the threshold") {
  Rng g(5);
  auto pts = plane_points(g, Vec3(0, 1, 0), -0.3, 90, 0.004);
  for (int i = 0; i < 40; ++i)
    pts.push_back({g.uniform(-2.0, 2.0), g.uniform(-2.0, 2.0), g.uniform(-2.0, 2.0)});
  RansacParams params;
  params.inlier_threshold = 0.012;
  params.seed = 99;
  const PlaneFit fit = ransac_plane(pts, params, Exec::serial);
  CHECK(!fit.inlier_indices.empty());
  for (size_t i = 1; i < fit.inlier_indices.size(); ++i)
    CHECK(fit.inlier_indices[i - 1] < fit.inlier_indices[i]);
  double sq = 0.0;
  for (int idx : fit.inlier_indices) {
    const double d = std::abs(plane_signed_distance(fit.plane, pts[idx]));
    CHECK(d <= params.inlier_threshold + 1e-12);
    sq += d * d;
  }
  CHECK(fit.inlier_rmse ==
        doctest::Approx(std::sqrt(sq / double(fit.inlier_indices.size()))).epsilon(1e-9));
}

TEST_CASE("30 percent gross outliers: direction holds across seeds") {
  Rng g(6);
  const Vec3 n = Vec3(0.2, 0.4, 0.9).normalized();
  const auto clean = plane_points(g, n, 0.5, 91, 0.0);
  auto pts = clean;
  for (int i = 0; i < 39; ++i)
    pts.push_back({g.uniform(-3.0, 3.0), g.uniform(-3.0, 3.0), g.uniform(-3.0, 3.0)});
  const Plane reference = fit_plane_lsq(clean);
  RansacParams params;
  params.iterations = 1000;
  params.inlier_threshold = 0.01;
  int good = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    params.seed = seed;
    const PlaneFit fit = ransac_plane(pts, params, Exec::serial);
    if (angle_to(fit.plane.normal, reference.normal) <= 2.0 * kPi / 180.0) ++good;
  }
  CHECK(good >= 57);  // 95% of 60
}

TEST_CASE("invalid parameters are rejected up front") {
  Rng g(7);
  const auto pts = plane_points(g, Vec3(0, 0, 1), 1.0, 30, 0.0);
  RansacParams params;
  params.iterations = 0;
  CHECK_THROWS_AS(ransac_plane(pts, params, Exec::serial), Error);
  params = RansacParams{};
  params.inlier_threshold = 0.0;
  CHECK_THROWS_AS(ransac_plane(pts, params, Exec::serial), Error);
  params = RansacParams{};
  params.min_inliers = 2;
  try {
    ransac_plane(pts, params, Exec::serial);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_input);
  }
}

TEST_CASE("too few points for the quorum") {
  const std::vector<Point3> two = {{0, 0, 0}, {1, 0, 0}};
  RansacParams params;
  try {
    ransac_plane(two, params, Exec::serial);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::insufficient_points);
  }
}

TEST_CASE("scattered points never reach the quorum") {
  // Any 3 points span a plane holding exactly those 3; quorum of 10 is
  // unreachable on a generic cloud with a tight threshold.
  Rng g(8);
  std::vector<Point3> pts;
  for (int i = 0; i < 20; ++i)
    pts.push_back({g.uniform(-5.0, 5.0), g.uniform(-5.0, 5.0), g.uniform(-5.0, 5.0)});
  RansacParams params;
  params.inlier_threshold = 1e-9;
  params.min_inliers = 10;
  params.seed = 3;
  try {
    ransac_plane(pts, params, Exec::serial);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::no_consensus);
  }
}

TEST_CASE("the automatic quorum is a tenth of the cloud") {
  CHECK(default_min_inliers(1000) == 100);
  CHECK(default_min_inliers(20) == 3);
  CHECK(default_min_inliers(0) == 3);

  // 8 coplanar points among 92 scattered: consensus 8 misses the quorum of 10.
  Rng g(9);
  std::vector<Point3> pts;
  for (int i = 0; i < 92; ++i)
    pts.push_back({g.uniform(-5.0, 5.0), g.uniform(-5.0, 5.0), g.uniform(-5.0, 5.0)});
  const auto co = plane_points(g, Vec3(0, 0, 1), 0.5, 8, 0.0);
  pts.insert(pts.end(), co.begin(), co.end());
  RansacParams params;
  params.inlier_threshold = 1e-9;
  params.seed = 4;
  try {
    ransac_plane(pts, params, Exec::serial);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::no_consensus);
  }
}
