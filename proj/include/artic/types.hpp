#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <stdexcept>
#include <string>

namespace artic {

using Vec3 = Eigen::Vector3d;
using Point3 = Eigen::Vector3d;
using Pixel = Eigen::Vector2d;
using Pose = Eigen::Isometry3d;

/// Pinhole camera. Frame convention: +X right, +Y down, +Z forward (optical axis).
/// Integer pixel coordinates address pixel centers.
struct CameraIntrinsics {
  double fx = 525.0;
  double fy = 525.0;
  double cx = 319.5;
  double cy = 239.5;
  int width = 640;
  int height = 480;
};

/// Oriented plane {p : normal . p = offset} with unit normal.
/// Canonical orientation: normal . (0,0,-1) >= 0, i.e. the normal faces the
/// camera; exact ties are broken toward the lexicographically larger normal.
struct Plane {
  Vec3 normal = Vec3::UnitZ();
  double offset = 0.0;
};

/// Infinite line {point + t * direction} with unit direction.
/// Canonical direction: the first component whose magnitude exceeds 1e-9 is
/// positive.
struct Line3 {
  Point3 point = Point3::Zero();
  Vec3 direction = Vec3::UnitX();
};

enum class ErrorCode {
  invalid_depth,
  behind_camera,
  degenerate_geometry,
  parallel_planes,
  insufficient_points,
  no_consensus,
  plane_fit_failed,
  joint_limit,
  missing_entity,
  shape_mismatch,
  invalid_input,
  incomplete_input,
  parse_error,
  io_error,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace artic
