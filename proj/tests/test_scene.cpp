#include <cmath>
#include <map>
#include <set>

#include "artic/geometry.hpp"
#include "artic/rng.hpp"
#include "artic/scene.hpp"
#include "doctest.h"

using namespace artic;

namespace {

constexpr double kPi = 3.14159265358979323846;

bool joints_equal(const Joint& a, const Joint& b) {
  return a.parent == b.parent && a.child == b.child && a.kind == b.kind && a.lo == b.lo &&
         a.hi == b.hi && a.span == b.span && (a.axis.point - b.axis.point).norm() == 0 &&
         (a.axis.direction - b.axis.direction).norm() == 0 &&
         (a.direction - b.direction).norm() == 0;
}

// Distance from a camera-frame point to the nearest posed face of a part.
double surface_distance(const Part& part, const Pose& pose, const Point3& p_cam) {
  const Point3 p = pose.inverse() * p_cam;
  double best = 1e9;
  for (const auto& face : part.faces) {
    if (const auto* r = std::get_if<RectFace>(&face)) {
      const Vec3 rel = p - r->origin;
      const double u = std::clamp(rel.dot(r->u_dir), 0.0, r->u_len);
      const double v = std::clamp(rel.dot(r->v_dir), 0.0, r->v_len);
      best = std::min(best, (rel - u * r->u_dir - v * r->v_dir).norm());
    } else if (const auto* c = std::get_if<CylFace>(&face)) {
      const Vec3 rel = p - c->base;
      const double t = std::clamp(rel.dot(c->axis_dir), 0.0, c->height);
      const Vec3 radial = rel - rel.dot(c->axis_dir) * c->axis_dir;
      const double rd = radial.norm();
      const double dr = std::abs(rd - c->radius);
      const double axial = std::abs(rel.dot(c->axis_dir) - t);
      best = std::min(best, std::hypot(dr, axial));
    } else if (const auto* dk = std::get_if<DiskFace>(&face)) {
      const Vec3 rel = p - dk->center;
      const double h = rel.dot(dk->normal);
      const Vec3 inplane = rel - h * dk->normal;
      const double rd = std::max(0.0, inplane.norm() - dk->radius);
      best = std::min(best, std::hypot(h, rd));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("build_object is a pure function of category and seed") {
  const ArticulatedObject a = build_object(Category::door, 7);
  const ArticulatedObject b = build_object(Category::door, 7);
  CHECK(a.category == b.category);
  CHECK(a.scale == b.scale);
  REQUIRE(a.parts.size() == b.parts.size());
  REQUIRE(a.joints.size() == b.joints.size());
  for (size_t i = 0; i < a.joints.size(); ++i) CHECK(joints_equal(a.joints[i], b.joints[i]));
  for (size_t i = 0; i < a.parts.size(); ++i) {
    CHECK(a.parts[i].id == b.parts[i].id);
    CHECK(a.parts[i].name == b.parts[i].name);
    CHECK(a.parts[i].faces.size() == b.parts[i].faces.size());
    CHECK(a.parts[i].face_primary == b.parts[i].face_primary);
  }
  const ArticulatedObject c = build_object(Category::door, 8);
  CHECK(a.scale != c.scale);
}

TEST_CASE("category rows fix the joint kinds") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    for (Category cat : {Category::door, Category::faucet, Category::dishwasher, Category::fridge}) {
      const ArticulatedObject obj = build_object(cat, seed);
      int revolute = 0;
      for (const auto& j : obj.joints) {
        CHECK(j.kind != JointKind::prismatic);
        if (j.kind == JointKind::revolute) ++revolute;
      }
      CHECK(revolute >= 1);
    }
    {
      const ArticulatedObject obj = build_object(Category::window, seed);
      int prismatic = 0;
      for (const auto& j : obj.joints) {
        CHECK(j.kind != JointKind::revolute);
        if (j.kind == JointKind::prismatic) ++prismatic;
      }
      CHECK(prismatic >= 1);
    }
    {
      const ArticulatedObject obj = build_object(Category::cabinet, seed);
      int prismatic = 0, revolute = 0;
      for (const auto& j : obj.joints) {
        if (j.kind == JointKind::prismatic) ++prismatic;
        if (j.kind == JointKind::revolute) ++revolute;
      }
      CHECK(prismatic >= 1);
      CHECK(revolute >= 1);
    }
  }
}

TEST_CASE("joints form a tree rooted at the first part") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    for (int ci = 0; ci < kNumCategories; ++ci) {
      const ArticulatedObject obj = build_object(static_cast<Category>(ci), seed);
      REQUIRE(!obj.parts.empty());
      std::set<int> ids;
      for (const auto& p : obj.parts) CHECK(ids.insert(p.id).second);
      CHECK(ids.count(0) == 0);  // 0 is the background label

      std::set<int> reached = {obj.parts[0].id};
      std::set<int> children;
      for (const auto& j : obj.joints) {
        CHECK(ids.count(j.parent) == 1);
        CHECK(ids.count(j.child) == 1);
        CHECK(children.insert(j.child).second);       // one parent per child
        CHECK(reached.count(j.parent) == 1);          // parent precedes child
        CHECK(reached.insert(j.child).second);        // no cycles
      }
      CHECK(reached.size() == obj.parts.size());      // spanning
      CHECK(obj.joints.size() + 1 == obj.parts.size());
    }
  }
}

TEST_CASE("joint limits stay inside the advertised ranges") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    for (int ci = 0; ci < kNumCategories; ++ci) {
      const Category cat = static_cast<Category>(ci);
      const ArticulatedObject obj = build_object(cat, seed);
      CHECK(obj.scale >= 0.5);
      CHECK(obj.scale <= 2.0);
      for (const auto& j : obj.joints) {
        if (j.kind == JointKind::revolute) {
          CHECK(j.lo == 0.0);
          CHECK(j.hi >= kPi / 2 - 1e-9);
          const double cap = cat == Category::faucet ? kPi : kPi * 135.0 / 180.0;
          CHECK(j.hi <= cap + 1e-9);
          CHECK(j.axis.direction.norm() == doctest::Approx(1.0).epsilon(1e-12));
        } else if (j.kind == JointKind::prismatic) {
          CHECK(j.lo == 0.0);
          CHECK(j.max_travel() > 0.0);
          CHECK(j.span > 0.0);
          // Travel is 30-60% of the child extent along the slide direction.
          const double frac = j.max_travel() / j.span;
          CHECK(frac >= 0.30);
          CHECK(frac <= 0.65);
        }
      }
    }
  }
}

TEST_CASE("forward kinematics composes twists parent-first") {
  ArticulatedObject obj;
  obj.category = Category::cabinet;
  obj.parts.resize(3);
  obj.parts[0].id = 1;
  obj.parts[1].id = 2;
  obj.parts[2].id = 3;

  Joint rev;
  rev.parent = 1;
  rev.child = 2;
  rev.kind = JointKind::revolute;
  rev.axis = make_line(Point3(0.5, 0.2, 0), Vec3(0, 0, 1));
  rev.lo = 0;
  rev.hi = kPi;
  Joint pri;
  pri.parent = 2;
  pri.child = 3;
  pri.kind = JointKind::prismatic;
  pri.direction = Vec3(1, 0, 0);
  pri.lo = 0;
  pri.hi = 0.4;
  obj.joints = {rev, pri};

  const double th = 0.8, tv = 0.25;
  const auto poses = part_poses(obj, {th, tv});
  REQUIRE(poses.size() == 3);
  CHECK(poses[0].isApprox(Pose::Identity()));

  // The hinge pivot is a fixed point of the child pose.
  const Point3 pivot(0.5, 0.2, 0);
  CHECK((poses[1] * pivot - pivot).norm() <= 1e-12);
  const Point3 probe(1.5, 0.2, 0.3);
  const Point3 expect = rotate_about_axis(probe, rev.axis, th);
  CHECK((poses[1] * probe - expect).norm() <= 1e-12);

  // Grandchild: hinge twist applied to the slid point.
  const Point3 slid = probe + tv * Vec3(1, 0, 0);
  CHECK((poses[2] * probe - rotate_about_axis(slid, rev.axis, th)).norm() <= 1e-12);
}

TEST_CASE("part_poses validates its inputs") {
  ArticulatedObject obj;
  obj.parts.resize(2);
  obj.parts[0].id = 1;
  obj.parts[1].id = 2;
  Joint j;
  j.parent = 1;
  j.child = 2;
  j.kind = JointKind::revolute;
  j.axis = make_line(Point3(0, 0, 0), Vec3(0, 0, 1));
  j.lo = 0;
  j.hi = 1.0;
  obj.joints = {j};

  try {
    part_poses(obj, {1.5});
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::joint_limit);
  }
  try {
    part_poses(obj, {0.5, 0.5});
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::shape_mismatch);
  }

  // Child listed before its parent is rejected.
  ArticulatedObject chain = obj;
  chain.parts.resize(3);
  chain.parts[2].id = 3;
  Joint k;
  k.parent = 3;
  k.child = 1;
  k.kind = JointKind::fixed_joint;
  chain.joints = {k, j};
  CHECK_THROWS_AS(part_poses(chain, {0.0, 0.5}), Error);
}

TEST_CASE("sample_camera stays in the front upper hemisphere and aims at the object") {
  Aabb bounds;
  bounds.lo = Point3(-0.3, -0.5, 0.0);
  bounds.hi = Point3(0.1, 0.5, 1.2);
  SceneConfig config;
  const Point3 center = bounds.center();
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Pose cam = sample_camera(bounds, config, seed);
    const Vec3 rel = cam.translation() - center;
    CHECK(rel.z() >= -1e-9);
    const double azim = std::atan2(std::abs(rel.y()), rel.x());
    CHECK(azim <= 75.0 * kPi / 180.0 + 1e-9);
    // Optical axis within 10 degrees of the direction toward the center.
    const Vec3 look = cam.linear().col(2);
    const double misaim = std::acos(std::clamp(look.dot(-rel.normalized()), -1.0, 1.0));
    CHECK(misaim <= 10.0 * kPi / 180.0);
    // Rotation is orthonormal.
    CHECK((cam.linear() * cam.linear().transpose() - Eigen::Matrix3d::Identity()).norm() <= 1e-9);
  }
  const Pose p1 = sample_camera(bounds, config, 42);
  const Pose p2 = sample_camera(bounds, config, 42);
  CHECK(p1.matrix() == p2.matrix());

  SceneConfig fixed_r = config;
  fixed_r.radius_lo = 2.0;
  fixed_r.radius_hi = 2.5;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Pose cam = sample_camera(bounds, fixed_r, seed);
    const double d = (cam.translation() - center).norm();
    CHECK(d >= 2.0 - 1e-9);
    CHECK(d <= 2.5 + 1e-9);
  }
}

TEST_CASE("a fronto-parallel face renders at its exact depth") {
  Part part;
  part.id = 1;
  part.name = "card";
  part.faces.push_back(RectFace{Point3(-0.2, -0.2, 1.0), Vec3::UnitX(), Vec3::UnitY(), 0.4, 0.4});

  CameraIntrinsics cam;
  PosedPart pp;
  pp.part = &part;
  const RenderResult res = render_parts(cam, {pp}, {1}, Exec::serial);
  REQUIRE(res.visible_pixels.size() == 1);
  CHECK(res.visible_pixels[0] > 10000);
  CHECK(res.primary_pixels[0] == res.visible_pixels[0]);
  int on = 0;
  for (int y = 0; y < cam.height; ++y)
    for (int x = 0; x < cam.width; ++x) {
      const float d = res.depth(x, y);
      CHECK((d == 0.0f) == (res.seg(x, y) == 0));
      if (res.seg(x, y) != 0) {
        ++on;
        CHECK(std::abs(d - 1.0f) <= 1e-3f);
        // The pixel ray really pierces the face.
        const Point3 p = deproject(cam, x, y, d);
        CHECK(std::abs(p.z() - 1.0) <= 1e-6);
        CHECK(p.x() >= -0.2 - 1e-6);
        CHECK(p.x() <= 0.2 + 1e-6);
      }
    }
  CHECK(on == res.visible_pixels[0]);
  // The footprint matches the projected square.
  const Pixel center = project(cam, Point3(0, 0, 1));
  CHECK(res.seg(int(center.x()), int(center.y())) == 1);
  CHECK(res.seg(5, 5) == 0);
}

TEST_CASE("an object fully behind the camera renders empty") {
  const ArticulatedObject obj = build_object(Category::door, 3);
  const std::vector<double> values(obj.joints.size(), 0.0);
  CameraIntrinsics cam;
  Pose behind = Pose::Identity();
  behind.translation() = Point3(0, 0, object_bounds(obj).hi.z() + 5.0);
  const RenderedScene scene = render_scene(obj, values, {}, {}, cam, behind, Exec::serial);
  for (float d : scene.depth.data) CHECK(d == 0.0f);
  for (auto s : scene.seg.data) CHECK(s == 0);
  for (const auto& p : scene.parts) CHECK(p.visible_pixels == 0);
}

TEST_CASE("render_scene is deterministic and exec-mode invariant") {
  const ArticulatedObject obj = build_object(Category::fridge, 11);
  const SceneConfig config;
  const RenderedScene a = generate_scene(obj, config, 21, Exec::parallel);
  const RenderedScene b = generate_scene(obj, config, 21, Exec::parallel);
  const RenderedScene c = generate_scene(obj, config, 21, Exec::serial);
  CHECK(a.depth == b.depth);
  CHECK(a.seg == b.seg);
  CHECK(a.joint_values == b.joint_values);
  CHECK(a.depth == c.depth);
  CHECK(a.seg == c.seg);
  CHECK(a.joint_values == c.joint_values);
  CHECK(a.cam_to_world.matrix() == c.cam_to_world.matrix());
}

TEST_CASE("moving one joint only changes that panel's pixels") {
  const ArticulatedObject obj = build_object(Category::door, 5);
  REQUIRE(!obj.joints.empty());
  std::vector<double> v0(obj.joints.size(), 0.0);
  std::vector<double> v1 = v0;
  v1[0] = obj.joints[0].hi * 0.5;
  CameraIntrinsics cam;
  const Aabb bounds = object_bounds(obj);
  const Pose cam_pose = sample_camera(bounds, SceneConfig{}, 77);
  const RenderedScene a = render_scene(obj, v0, {}, {}, cam, cam_pose, Exec::serial);
  const RenderedScene b = render_scene(obj, v1, {}, {}, cam, cam_pose, Exec::serial);
  const int moving = obj.joints[0].child;
  bool moved_changed = false;
  for (int y = 0; y < cam.height; ++y)
    for (int x = 0; x < cam.width; ++x) {
      const bool a_moving = a.seg(x, y) == moving;
      const bool b_moving = b.seg(x, y) == moving;
      if (a_moving != b_moving || (a_moving && a.depth(x, y) != b.depth(x, y)))
        moved_changed = true;
      // Pixels showing a static part in both frames agree exactly.
      if (!a_moving && !b_moving && a.seg(x, y) == b.seg(x, y))
        CHECK(a.depth(x, y) == b.depth(x, y));
    }
  CHECK(moved_changed);
}

TEST_CASE("rendered depth deprojects onto the posed surface") {
  const ArticulatedObject obj = build_object(Category::cabinet, 19);
  const SceneConfig config;
  const RenderedScene scene = generate_scene(obj, config, 4, Exec::parallel);
  std::map<int, const Part*> by_id;
  std::map<int, Pose> pose_by_id;
  for (size_t i = 0; i < obj.parts.size(); ++i) {
    by_id[obj.parts[i].id] = &obj.parts[i];
    pose_by_id[obj.parts[i].id] = scene.part_poses_cam[i];
  }
  Rng g(1);
  int checked = 0;
  while (checked < 300) {
    const int x = int(g.below(scene.depth.width));
    const int y = int(g.below(scene.depth.height));
    const int id = scene.seg(x, y);
    if (id == 0 || !by_id.count(id)) continue;  // background or distractor
    const Point3 p = deproject(scene.camera, x, y, scene.depth(x, y));
    CHECK(surface_distance(*by_id[id], pose_by_id[id], p) <= 2e-3);
    ++checked;
  }
}

TEST_CASE("pair enumeration covers exactly the visible unordered pairs") {
  const ArticulatedObject obj = build_object(Category::cabinet, 2);
  const SceneConfig config;
  const RenderedScene scene = generate_scene(obj, config, 31, Exec::parallel);
  int visible = 0;
  for (const auto& p : scene.parts)
    if (p.visible_pixels > 0) ++visible;
  const auto gp = pairs(scene);
  CHECK(gp.size() == size_t(visible) * (visible - 1) / 2);

  // Connected pairs are exactly the object's joints between visible parts.
  std::set<std::pair<int, int>> joint_pairs;
  for (const auto& j : obj.joints) joint_pairs.insert(std::minmax(j.parent, j.child));
  for (const auto& pr : gp) {
    const auto key = std::minmax(pr.a, pr.b);
    if (pr.cls == PairClass::unconnected)
      CHECK(joint_pairs.count(key) == 0);
    else
      CHECK(joint_pairs.count(key) == 1);
    if (pr.cls == PairClass::revolute)
      CHECK(pr.axis.direction.norm() == doctest::Approx(1.0).epsilon(1e-12));
    if (pr.cls == PairClass::prismatic) CHECK(pr.max_travel > 0.0);
  }
  // Distractor pairs stay unconnected: any pair with an id outside the object
  // must be unconnected.
  std::set<int> object_ids;
  for (const auto& p : obj.parts) object_ids.insert(p.id);
  for (const auto& pr : gp)
    if (!object_ids.count(pr.a) || !object_ids.count(pr.b))
      CHECK(pr.cls == PairClass::unconnected);
}

TEST_CASE("generated joint values respect the limits") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const ArticulatedObject obj = build_object(Category::fridge, seed);
    const RenderedScene scene = generate_scene(obj, SceneConfig{}, seed + 50, Exec::parallel);
    REQUIRE(scene.joint_values.size() == obj.joints.size());
    for (size_t j = 0; j < obj.joints.size(); ++j) {
      if (obj.joints[j].kind == JointKind::fixed_joint) {
        CHECK(scene.joint_values[j] == 0.0);
      } else {
        CHECK(scene.joint_values[j] >= obj.joints[j].lo - 1e-12);
        CHECK(scene.joint_values[j] <= obj.joints[j].hi + 1e-12);
      }
    }
    // Every visible part meets the pixel floor.
    for (const auto& p : scene.parts)
      if (p.visible_pixels > 0 && !p.distractor) CHECK(p.visible_pixels >= 1);
  }
}
