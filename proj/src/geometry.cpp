#include "artic/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace artic {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_depth: return "invalid-depth";
    case ErrorCode::behind_camera: return "behind-camera";
    case ErrorCode::degenerate_geometry: return "degenerate-geometry";
    case ErrorCode::parallel_planes: return "parallel-planes";
    case ErrorCode::insufficient_points: return "insufficient-points";
    case ErrorCode::no_consensus: return "no-consensus";
    case ErrorCode::plane_fit_failed: return "plane-fit-failed";
    case ErrorCode::joint_limit: return "joint-limit";
    case ErrorCode::missing_entity: return "missing-entity";
    case ErrorCode::shape_mismatch: return "shape-mismatch";
    case ErrorCode::invalid_input: return "invalid-input";
    case ErrorCode::incomplete_input: return "incomplete-input";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

Point3 deproject(const CameraIntrinsics& cam, double u, double v, double depth) {
  if (!std::isfinite(depth) || depth <= 0.0) {
    throw Error(ErrorCode::invalid_depth, "deproject needs finite depth > 0");
  }
  return {(u - cam.cx) * depth / cam.fx, (v - cam.cy) * depth / cam.fy, depth};
}

Pixel project(const CameraIntrinsics& cam, const Point3& p) {
  if (!(p.z() > 0.0)) {
    throw Error(ErrorCode::behind_camera, "project needs z > 0");
  }
  return {cam.fx * p.x() / p.z() + cam.cx, cam.fy * p.y() / p.z() + cam.cy};
}

Vec3 canonical_direction(Vec3 v, double tol) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(v[i]) > tol) {
      if (v[i] < 0.0) v = -v;
      return v;
    }
  }
  return v;
}

Plane make_plane(Vec3 normal, double offset) {
  const double n = normal.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::degenerate_geometry, "plane normal must be non-zero");
  }
  normal /= n;
  offset /= n;
  // normal . (0,0,-1) >= 0; an exact tie falls to the lexicographic rule.
  const double toward_camera = -normal.z();
  bool flip = false;
  if (toward_camera < 0.0) {
    flip = true;
  } else if (toward_camera == 0.0) {
    flip = (canonical_direction(normal, 0.0) - normal).norm() > 0.0;
  }
  if (flip) {
    normal = -normal;
    offset = -offset;
  }
  return Plane{normal, offset};
}

Plane fit_plane_lsq(std::span<const Point3> points) {
  if (points.size() < 3) {
    throw Error(ErrorCode::degenerate_geometry, "plane fit needs >= 3 points");
  }
  Vec3 centroid = Vec3::Zero();
  for (const Point3& p : points) centroid += p;
  centroid /= double(points.size());

  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (const Point3& p : points) {
    const Vec3 d = p - centroid;
    scatter += d * d.transpose();
  }

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver;
  solver.computeDirect(scatter);
  const Vec3 eig = solver.eigenvalues();  // ascending
  if (!(eig[2] > 0.0) || eig[1] <= 1e-12 * eig[2]) {
    throw Error(ErrorCode::degenerate_geometry, "points are collinear or coincident");
  }
  const Vec3 normal = solver.eigenvectors().col(0);
  return make_plane(normal, normal.dot(centroid));
}

Line3 make_line(Point3 point, Vec3 direction) {
  const double n = direction.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::degenerate_geometry, "line direction must be non-zero");
  }
  return Line3{point, canonical_direction(direction / n)};
}

Line3 plane_intersection(const Plane& a, const Plane& b) {
  const double t = a.normal.dot(b.normal);
  if (std::abs(t) >= 1.0 - 1e-9) {
    throw Error(ErrorCode::parallel_planes, "planes are parallel");
  }
  const double denom = 1.0 - t * t;
  // Closest point to the origin lies in span(normal_a, normal_b).
  const Point3 point =
      ((a.offset - b.offset * t) * a.normal + (b.offset - a.offset * t) * b.normal) / denom;
  return make_line(point, a.normal.cross(b.normal));
}

Point3 rotate_about_axis(const Point3& p, const Line3& axis, double angle) {
  const Vec3& u = axis.direction;
  const Vec3 v = p - axis.point;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const Vec3 rotated = v * c + u.cross(v) * s + u * (u.dot(v)) * (1.0 - c);
  return axis.point + rotated;
}

double point_to_line_distance(const Point3& p, const Line3& line) {
  return (p - line.point).cross(line.direction).norm();
}

Vec3 any_orthogonal(const Vec3& v) {
  const Vec3 a = v.cwiseAbs();
  Vec3 pick = Vec3::UnitX();
  if (a.y() <= a.x() && a.y() <= a.z())
    pick = Vec3::UnitY();
  else if (a.z() <= a.x() && a.z() <= a.y())
    pick = Vec3::UnitZ();
  return v.cross(pick).normalized();
}

}  // namespace artic
