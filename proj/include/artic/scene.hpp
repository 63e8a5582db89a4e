#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "artic/image.hpp"
#include "artic/parallel.hpp"
#include "artic/types.hpp"

namespace artic {

enum class Category { door, window, faucet, dishwasher, fridge, cabinet };

const char* category_name(Category c);
Category category_from_name(const std::string& name);  // throws invalid_input
inline constexpr int kNumCategories = 6;

enum class JointKind { revolute, prismatic, fixed_joint };

/// Four-way pair label used by both ground truth and estimates.
enum class PairClass { revolute, prismatic, fixed_joint, unconnected };

const char* pair_class_name(PairClass c);
PairClass pair_class_from_name(const std::string& name);

/// Axis-aligned rectangle patch: origin + u * u_dir + v * v_dir,
/// u in [0, u_len], v in [0, v_len]. u_dir and v_dir are unit and orthogonal.
struct RectFace {
  Point3 origin;
  Vec3 u_dir;
  Vec3 v_dir;
  double u_len = 0;
  double v_len = 0;
};

/// Lateral cylinder surface: axis from base along axis_dir (unit), given
/// radius and height.
struct CylFace {
  Point3 base;
  Vec3 axis_dir;
  double radius = 0;
  double height = 0;
};

/// Filled disk: center, unit normal, radius.
struct DiskFace {
  Point3 center;
  Vec3 normal;
  double radius = 0;
};

using Face = std::variant<RectFace, CylFace, DiskFace>;

/// Rigid part: faces are authored in the object frame at the rest
/// configuration (all joint values zero).
struct Part {
  int id = 0;
  std::string name;
  std::vector<Face> faces;
  /// Parallel to `faces`: 1 marks functional surface, 0 attachment detail
  /// (handles, knobs). Empty means every face is functional.
  std::vector<std::uint8_t> face_primary;

  /// Regular surface sampling with grid pitch <= spacing; returns
  /// (point, face index) pairs. Density >= one sample per spacing^2.
  std::vector<std::pair<Point3, int>> sample_surface(double spacing) const;
};

/// Tree edge; the child rigidly follows Twist(axis | direction, value)
/// composed onto the parent pose. Axis and direction are object-frame.
struct Joint {
  int parent = 0;
  int child = 0;
  JointKind kind = JointKind::fixed_joint;
  Line3 axis;                     // revolute
  Vec3 direction = Vec3::UnitX();  // prismatic, signed toward hi
  double lo = 0;
  double hi = 0;
  double span = 0;  // child extent along the axis/direction, meters

  double max_travel() const { return hi - lo; }
};

struct ArticulatedObject {
  Category category = Category::door;
  double scale = 1.0;
  std::vector<Part> parts;    // parts[0] is the root
  std::vector<Joint> joints;  // every non-root part is a child exactly once
};

/// Procedural object for the category; dimensions are drawn from
/// category-plausible ranges and the whole object is scaled by a factor
/// uniform in [0.5, 2.0]. Deterministic per seed.
ArticulatedObject build_object(Category category, std::uint64_t seed);

/// Free-floating clutter part (box or capped cylinder) whose dimensions are
/// proportional to size_scale. Faces are centered on the local origin.
Part build_distractor(std::uint64_t seed, double size_scale);

/// Representative extreme points of a face (rect corners, cylinder end
/// rings); used for bounding boxes and extents.
std::vector<Point3> face_sample_points(const Face& face);

/// Object-frame pose of every part at the given joint configuration.
/// Throws joint_limit if a value is outside its [lo, hi].
std::vector<Pose> part_poses(const ArticulatedObject& object, const std::vector<double>& values);

/// The rigid motion Twist(joint, value) that the joint applies to its child.
Pose joint_twist(const Joint& joint, double value);

struct SceneConfig {
  CameraIntrinsics camera;
  double radius_lo = 0;  // meters; <= 0 resolves from the object bounds
  double radius_hi = 0;
  double azimuth_limit_deg = 75.0;
  double elevation_lo_deg = 0.0;
  double elevation_hi_deg = 75.0;
  double lookat_jitter_frac = 0.05;  // of the object extent
  int distractors = 2;
  double max_occlusion = 0.5;   // of a part's unoccluded pixels
  int min_part_pixels = 150;    // per-part visibility floor for scene acceptance
  double min_mean_flow = 0.015;  // meters; observability floor per moving pair
  int max_camera_attempts = 25;
};

struct Aabb {
  Point3 lo = Point3::Zero();
  Point3 hi = Point3::Zero();
  Point3 center() const { return 0.5 * (lo + hi); }
  double radius() const { return 0.5 * (hi - lo).norm(); }
  double extent() const { return (hi - lo).norm(); }
};

Aabb object_bounds(const ArticulatedObject& object);

/// Camera pose (cam_to_world) on the front-upper hemisphere shell around the
/// object: +X is the object front, azimuth within +-azimuth_limit, elevation
/// area-uniform in its range, radius uniform in the resolved range, and the
/// optical axis aimed at the jittered object center. Deterministic per seed.
Pose sample_camera(const Aabb& bounds, const SceneConfig& config, std::uint64_t seed);

struct PartInfo {
  int id = 0;
  std::string name;
  bool distractor = false;
  int visible_pixels = 0;
  int primary_pixels = 0;  // visible pixels lying on functional faces
};

/// Ground truth for one unordered part pair. For connected pairs (a, b) is
/// (parent, child) and the joint parameters are expressed in the camera
/// frame at the rendered configuration.
struct GroundTruthPair {
  int a = 0;
  int b = 0;
  PairClass cls = PairClass::unconnected;
  Line3 axis;                      // revolute
  Vec3 direction = Vec3::UnitX();  // prismatic, signed toward hi
  double lo = 0;
  double hi = 0;
  double value = 0;
  double max_travel = 0;
  double span = 0;
};

struct RenderedScene {
  CameraIntrinsics camera;
  Pose cam_to_world = Pose::Identity();
  Category category = Category::door;
  double scale = 1.0;
  DepthImage depth;
  SegImage seg;
  std::vector<PartInfo> parts;
  std::vector<double> joint_values;
  std::vector<Pose> part_poses_cam;        // camera frame, object parts
  std::vector<GroundTruthPair> gt_pairs;   // all part pairs, visible or not
};

/// One part instance posed in the camera frame for rendering.
struct PosedPart {
  const Part* part = nullptr;
  Pose pose_cam = Pose::Identity();
  double density_floor = 0.002;  // native sampling pitch, meters
};

struct RenderResult {
  DepthImage depth;
  SegImage seg;  // part ids as listed, in order
  std::vector<int> visible_pixels;
  std::vector<int> primary_pixels;  // subset of visible_pixels on functional faces
};

/// Point-splat z-buffer render. Every sample is projected to its pixel and
/// the stored depth is the exact intersection of that pixel's center ray
/// with the sample's face, so deprojecting a rendered pixel lands back on
/// the surface; samples whose center ray misses the face are dropped.
/// Exact depth ties resolve to the earlier part. Both exec modes are
/// bit-identical.
RenderResult render_parts(const CameraIntrinsics& cam, const std::vector<PosedPart>& parts,
                          const std::vector<std::uint16_t>& part_ids, Exec exec = Exec::parallel);

/// Renders the object at the given configuration (plus optional distractor
/// parts posed in world frame) and assembles per-pair ground truth.
RenderedScene render_scene(const ArticulatedObject& object, const std::vector<double>& values,
                           const std::vector<Part>& distractors,
                           const std::vector<Pose>& distractor_poses, const CameraIntrinsics& cam,
                           const Pose& cam_to_world, Exec exec = Exec::parallel);

/// Full per-scene pipeline: joint configuration uniform within limits,
/// camera sampling, distractor placement, and visibility/occlusion
/// acceptance with bounded deterministic retries.
RenderedScene generate_scene(const ArticulatedObject& object, const SceneConfig& config,
                             std::uint64_t seed, Exec exec = Exec::parallel);

/// All unordered part pairs with at least one visible pixel on each side,
/// with their ground-truth labels.
std::vector<GroundTruthPair> pairs(const RenderedScene& scene);

}  // namespace artic
