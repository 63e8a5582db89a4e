#pragma once

#include <span>

#include "artic/types.hpp"

namespace artic {

/// Back-projects pixel (u, v) with metric depth into the camera frame.
/// Throws invalid_depth if depth is non-positive or non-finite.
Point3 deproject(const CameraIntrinsics& cam, double u, double v, double depth);

/// Projects a camera-frame point to continuous pixel coordinates.
/// Throws behind_camera if p.z() <= 0.
Pixel project(const CameraIntrinsics& cam, const Point3& p);

/// Flips v if needed so the first component with |c| > tol is positive.
/// v must be non-zero.
Vec3 canonical_direction(Vec3 v, double tol = 1e-9);

/// Some unit vector orthogonal to v (deterministic in v).
Vec3 any_orthogonal(const Vec3& v);

/// Normalizes and applies the canonical camera-facing orientation.
/// Throws degenerate_geometry on a zero normal.
Plane make_plane(Vec3 normal, double offset);

/// Signed distance from p to the plane (positive along the normal).
inline double plane_signed_distance(const Plane& pl, const Point3& p) {
  return pl.normal.dot(p) - pl.offset;
}

/// Least-squares plane through >= 3 non-collinear points: centroid plus the
/// smallest-eigenvalue direction of the scatter matrix (closed-form symmetric
/// 3x3 solver). Throws degenerate_geometry otherwise.
Plane fit_plane_lsq(std::span<const Point3> points);

/// Normalizes and canonicalizes the direction; the point is kept.
Line3 make_line(Point3 point, Vec3 direction);

/// Intersection line of two non-parallel planes; the returned point is the
/// point of the line closest to the origin. Throws parallel_planes when
/// |a.normal . b.normal| >= 1 - 1e-9.
Line3 plane_intersection(const Plane& a, const Plane& b);

/// Rodrigues rotation of p about the axis line by angle (radians).
Point3 rotate_about_axis(const Point3& p, const Line3& axis, double angle);

double point_to_line_distance(const Point3& p, const Line3& line);

}  // namespace artic
