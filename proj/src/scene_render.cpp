#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "artic/flow.hpp"
#include "artic/geometry.hpp"
#include "artic/rng.hpp"
#include "artic/scene.hpp"

namespace artic {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::uint64_t kEmptyKey = ~std::uint64_t{0};

// Face posed into the camera frame with a precomputed sample grid. Sampling
// and ray intersection both run on the posed data so a rendered pixel's
// depth is the exact ray/surface intersection.
struct PosedFace {
  enum Kind { rect, cyl, disk } kind = rect;
  Point3 o = Point3::Zero();  // rect origin / cyl base / disk center
  Vec3 u = Vec3::UnitX();     // rect u / cyl axis / disk e1
  Vec3 v = Vec3::UnitY();     // rect v / cyl e1 / disk e2
  Vec3 w = Vec3::UnitZ();     // cyl e2 / plane normal (rect, disk)
  double a = 0, b = 0;        // rect u_len,v_len; cyl radius,height; disk radius
  double off = 0;             // plane offset (rect, disk)
  std::int64_t n0 = 0, n1 = 0;
  double d0 = 0, d1 = 0;  // grid steps

  std::int64_t count() const { return n0 * n1; }

  bool sample(std::int64_t k, Point3& out) const {
    const std::int64_t i = k % n0;
    const std::int64_t j = k / n0;
    switch (kind) {
      case rect:
        out = o + (i + 0.5) * d0 * u + (j + 0.5) * d1 * v;
        return true;
      case cyl: {
        const double ang = (i + 0.5) * d0;
        out = o + (j + 0.5) * d1 * u + a * (std::cos(ang) * v + std::sin(ang) * w);
        return true;
      }
      case disk: {
        const double x = -a + (i + 0.5) * d0;
        const double y = -a + (j + 0.5) * d0;
        if (x * x + y * y > a * a) return false;
        out = o + x * u + y * v;
        return true;
      }
    }
    return false;
  }

  // Depth of the intersection of ray t*dir (dir.z == 1) with this face,
  // accepting hits within `margin` of the boundary. Negative when the ray
  // misses; the caller drops the sample in that case.
  double ray_depth(const Vec3& dir, double margin) const {
    if (kind == cyl) {
      const Vec3& axis = u;
      const Vec3 wd = dir - dir.dot(axis) * axis;
      const Vec3 mp = o.dot(axis) * axis - o;
      const double qa = wd.squaredNorm();
      if (qa < 1e-14) return -1.0;
      const double qb = 2.0 * wd.dot(mp);
      const double qc = mp.squaredNorm() - a * a;
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc < 0.0) return -1.0;
      const double root = std::sqrt(disc);
      for (double t : {(-qb - root) / (2.0 * qa), (-qb + root) / (2.0 * qa)}) {
        if (t <= 1e-6) continue;
        const double z = (t * dir - o).dot(axis);
        if (z >= -margin && z <= b + margin) return t;
      }
      return -1.0;
    }
    const double den = dir.dot(w);
    if (std::abs(den) < 1e-12) return -1.0;
    const double t = off / den;
    if (t <= 1e-6) return -1.0;
    const Point3 hit = t * dir;
    if (kind == rect) {
      const double lu = (hit - o).dot(u);
      const double lv = (hit - o).dot(v);
      if (lu < -margin || lu > this->a + margin || lv < -margin || lv > this->b + margin)
        return -1.0;
      return t;
    }
    if ((hit - o).norm() > a + margin) return -1.0;
    return t;
  }
};

std::int64_t grid_steps(double length, double pitch) {
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(length / pitch)));
}

// At most ~20M samples per face; pathological pitches are coarsened.
double bounded_pitch(double pitch, double dim0, double dim1) {
  const double cells = (dim0 / pitch) * (dim1 / pitch);
  if (cells > 2e7) pitch = std::sqrt(dim0 * dim1 / 2e7);
  return pitch;
}

bool pose_face(const Face& face, const Pose& pose, double pitch, PosedFace& out) {
  if (const auto* r = std::get_if<RectFace>(&face)) {
    out.kind = PosedFace::rect;
    out.o = pose * r->origin;
    out.u = pose.linear() * r->u_dir;
    out.v = pose.linear() * r->v_dir;
    out.w = out.u.cross(out.v);
    out.off = out.w.dot(out.o);
    out.a = r->u_len;
    out.b = r->v_len;
    pitch = bounded_pitch(pitch, r->u_len, r->v_len);
    out.n0 = grid_steps(r->u_len, pitch);
    out.n1 = grid_steps(r->v_len, pitch);
    out.d0 = r->u_len / out.n0;
    out.d1 = r->v_len / out.n1;
    return r->u_len > 0 && r->v_len > 0;
  }
  if (const auto* c = std::get_if<CylFace>(&face)) {
    out.kind = PosedFace::cyl;
    out.o = pose * c->base;
    out.u = (pose.linear() * c->axis_dir).normalized();
    out.v = any_orthogonal(out.u);
    out.w = out.u.cross(out.v);
    out.a = c->radius;
    out.b = c->height;
    const double circ = 2.0 * kPi * c->radius;
    pitch = bounded_pitch(pitch, circ, c->height);
    out.n0 = std::max<std::int64_t>(3, grid_steps(circ, pitch));
    out.n1 = grid_steps(c->height, pitch);
    out.d0 = 2.0 * kPi / out.n0;
    out.d1 = c->height / out.n1;
    return c->radius > 0 && c->height > 0;
  }
  const auto& d = std::get<DiskFace>(face);
  out.kind = PosedFace::disk;
  out.o = pose * d.center;
  out.w = (pose.linear() * d.normal).normalized();
  out.u = any_orthogonal(out.w);
  out.v = out.w.cross(out.u);
  out.off = out.w.dot(out.o);
  out.a = d.radius;
  pitch = bounded_pitch(pitch, 2 * d.radius, 2 * d.radius);
  out.n0 = grid_steps(2 * d.radius, pitch);
  out.n1 = out.n0;
  out.d0 = 2 * d.radius / out.n0;
  out.d1 = out.d0;
  return d.radius > 0;
}

inline void key_min_serial(std::uint64_t& slot, std::uint64_t key) {
  if (key < slot) slot = key;
}

inline void key_min_atomic(std::uint64_t& slot, std::uint64_t key) {
  std::atomic_ref<std::uint64_t> ref(slot);
  std::uint64_t cur = ref.load(std::memory_order_relaxed);
  while (key < cur && !ref.compare_exchange_weak(cur, key, std::memory_order_relaxed)) {
  }
}

struct PartBox {
  Point3 lo = Point3::Zero();
  Point3 hi = Point3::Zero();
  bool valid = false;
  void add(const Point3& p) {
    if (!valid) {
      lo = hi = p;
      valid = true;
      return;
    }
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
};

PartBox part_box(const Part& part, const Pose& pose) {
  PartBox box;
  for (const auto& face : part.faces)
    for (const auto& p : face_sample_points(face)) box.add(pose * p);
  return box;
}

}  // namespace

std::vector<std::pair<Point3, int>> Part::sample_surface(double spacing) const {
  if (!(spacing > 0))
    throw Error(ErrorCode::invalid_input, "sample spacing must be positive");
  std::vector<std::pair<Point3, int>> out;
  for (size_t fi = 0; fi < faces.size(); ++fi) {
    PosedFace pf;
    if (!pose_face(faces[fi], Pose::Identity(), spacing, pf)) continue;
    const std::int64_t n = pf.count();
    for (std::int64_t k = 0; k < n; ++k) {
      Point3 p;
      if (pf.sample(k, p)) out.emplace_back(p, static_cast<int>(fi));
    }
  }
  return out;
}

RenderResult render_parts(const CameraIntrinsics& cam, const std::vector<PosedPart>& parts,
                          const std::vector<std::uint16_t>& part_ids, Exec exec) {
  if (parts.size() != part_ids.size())
    throw Error(ErrorCode::shape_mismatch, "one part id per posed part required");
  if (parts.size() > 255)
    throw Error(ErrorCode::invalid_input, "at most 255 parts per render");
  if (cam.width <= 0 || cam.height <= 0 || !(cam.fx > 0) || !(cam.fy > 0))
    throw Error(ErrorCode::invalid_input, "bad camera intrinsics");
  for (std::uint16_t id : part_ids)
    if (id == 0) throw Error(ErrorCode::invalid_input, "part id 0 is reserved for background");

  const int w = cam.width, h = cam.height;
  const double f_max = std::max(cam.fx, cam.fy);
  std::vector<std::uint64_t> keys(static_cast<size_t>(w) * h, kEmptyKey);

  for (size_t pi = 0; pi < parts.size(); ++pi) {
    const PosedPart& pp = parts[pi];
    if (pp.part == nullptr) throw Error(ErrorCode::invalid_input, "null part");
    const auto& primary_flags = pp.part->face_primary;
    for (size_t fi = 0; fi < pp.part->faces.size(); ++fi) {
      const auto& face = pp.part->faces[fi];
      const bool primary = fi >= primary_flags.size() || primary_flags[fi] != 0;
      double z_lo = std::numeric_limits<double>::infinity();
      double z_hi = -std::numeric_limits<double>::infinity();
      for (const auto& p : face_sample_points(face)) {
        const double z = (pp.pose_cam * p).z();
        z_lo = std::min(z_lo, z);
        z_hi = std::max(z_hi, z);
      }
      if (!(z_hi > 0.05)) continue;  // fully behind the camera
      const double pitch =
          std::min(pp.density_floor, std::max(z_lo, 0.15) / f_max);
      PosedFace pf;
      if (!pose_face(face, pp.pose_cam, pitch, pf)) continue;
      const double margin = 0.6 * pitch;
      const std::int64_t n = pf.count();
      // Bit 8 flags attachment faces; at equal depth a functional face wins.
      const std::uint64_t order = (primary ? 0u : 0x100u) | pi;

      auto splat = [&](std::int64_t k, auto key_min) {
        Point3 p;
        if (!pf.sample(k, p)) return;
        if (!(p.z() > 1e-6)) return;
        const double u = cam.fx * p.x() / p.z() + cam.cx;
        const double v = cam.fy * p.y() / p.z() + cam.cy;
        if (!(u > -0.5 && u < w - 0.5 && v > -0.5 && v < h - 0.5)) return;
        const int xi = static_cast<int>(std::lround(u));
        const int yi = static_cast<int>(std::lround(v));
        const Vec3 dir((xi - cam.cx) / cam.fx, (yi - cam.cy) / cam.fy, 1.0);
        const double t = pf.ray_depth(dir, margin);
        if (t <= 0.0) return;
        const float ft = static_cast<float>(t);
        if (!(ft > 0.0f) || !std::isfinite(ft)) return;
        const std::uint64_t key =
            (static_cast<std::uint64_t>(std::bit_cast<std::uint32_t>(ft)) << 32) | order;
        key_min(keys[static_cast<size_t>(yi) * w + xi], key);
      };

      if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t k = 0; k < n; ++k)
          splat(k, [](std::uint64_t& s, std::uint64_t key) { key_min_atomic(s, key); });
      } else {
        for (std::int64_t k = 0; k < n; ++k)
          splat(k, [](std::uint64_t& s, std::uint64_t key) { key_min_serial(s, key); });
      }
    }
  }

  RenderResult res{DepthImage(w, h), SegImage(w, h), std::vector<int>(parts.size(), 0),
                   std::vector<int>(parts.size(), 0)};
  for (size_t idx = 0; idx < keys.size(); ++idx) {
    const std::uint64_t key = keys[idx];
    if (key == kEmptyKey) continue;
    res.depth.data[idx] = std::bit_cast<float>(static_cast<std::uint32_t>(key >> 32));
    const size_t order = key & 0xFFu;
    res.seg.data[idx] = part_ids[order];
    ++res.visible_pixels[order];
    if (((key >> 8) & 1u) == 0u) ++res.primary_pixels[order];
  }
  return res;
}

RenderedScene render_scene(const ArticulatedObject& object, const std::vector<double>& values,
                           const std::vector<Part>& distractors,
                           const std::vector<Pose>& distractor_poses, const CameraIntrinsics& cam,
                           const Pose& cam_to_world, Exec exec) {
  if (distractors.size() != distractor_poses.size())
    throw Error(ErrorCode::shape_mismatch, "one pose per distractor required");
  const std::vector<Pose> poses_obj = part_poses(object, values);
  const Pose view = cam_to_world.inverse();

  std::vector<PosedPart> posed;
  std::vector<std::uint16_t> ids;
  for (size_t i = 0; i < object.parts.size(); ++i) {
    posed.push_back({&object.parts[i], view * poses_obj[i], 1e9});
    ids.push_back(static_cast<std::uint16_t>(object.parts[i].id));
  }
  const int base_id = static_cast<int>(object.parts.size());
  for (size_t k = 0; k < distractors.size(); ++k) {
    posed.push_back({&distractors[k], view * distractor_poses[k], 1e9});
    ids.push_back(static_cast<std::uint16_t>(base_id + 1 + k));
  }

  RenderResult rr = render_parts(cam, posed, ids, exec);

  RenderedScene scene;
  scene.camera = cam;
  scene.cam_to_world = cam_to_world;
  scene.category = object.category;
  scene.scale = object.scale;
  scene.depth = std::move(rr.depth);
  scene.seg = std::move(rr.seg);
  scene.joint_values = values;
  for (size_t i = 0; i < object.parts.size(); ++i) {
    scene.parts.push_back({object.parts[i].id, object.parts[i].name, false, rr.visible_pixels[i],
                           rr.primary_pixels[i]});
    scene.part_poses_cam.push_back(view * poses_obj[i]);
  }
  for (size_t k = 0; k < distractors.size(); ++k)
    scene.parts.push_back({base_id + 1 + static_cast<int>(k), distractors[k].name, true,
                           rr.visible_pixels[object.parts.size() + k],
                           rr.primary_pixels[object.parts.size() + k]});

  // Per-pair ground truth; joint parameters move to the camera frame at the
  // rendered configuration.
  std::unordered_map<int, size_t> part_index;
  for (size_t i = 0; i < object.parts.size(); ++i) part_index[object.parts[i].id] = i;
  std::vector<GroundTruthPair> connected;
  for (size_t j = 0; j < object.joints.size(); ++j) {
    const Joint& joint = object.joints[j];
    GroundTruthPair gp;
    gp.a = joint.parent;
    gp.b = joint.child;
    gp.lo = joint.lo;
    gp.hi = joint.hi;
    gp.value = values[j];
    gp.span = joint.span;
    const Pose parent_world = poses_obj[part_index.at(joint.parent)];
    if (joint.kind == JointKind::revolute) {
      gp.cls = PairClass::revolute;
      gp.axis.point = view * (parent_world * joint.axis.point);
      gp.axis.direction = view.linear() * (parent_world.linear() * joint.axis.direction);
    } else if (joint.kind == JointKind::prismatic) {
      gp.cls = PairClass::prismatic;
      gp.direction = view.linear() * (parent_world.linear() * joint.direction);
      gp.max_travel = joint.max_travel();
    } else {
      gp.cls = PairClass::fixed_joint;
    }
    connected.push_back(gp);
  }
  const int total = static_cast<int>(scene.parts.size());
  for (int i = 0; i < total; ++i) {
    for (int j = i + 1; j < total; ++j) {
      const int a = scene.parts[i].id, b = scene.parts[j].id;
      bool covered = false;
      for (const auto& c : connected)
        if ((c.a == a && c.b == b) || (c.a == b && c.b == a)) {
          scene.gt_pairs.push_back(c);
          covered = true;
          break;
        }
      if (!covered) {
        GroundTruthPair gp;
        gp.a = a;
        gp.b = b;
        gp.cls = PairClass::unconnected;
        scene.gt_pairs.push_back(gp);
      }
    }
  }
  return scene;
}

std::vector<GroundTruthPair> pairs(const RenderedScene& scene) {
  std::unordered_map<int, int> visible;
  for (const auto& p : scene.parts) visible[p.id] = p.visible_pixels;
  std::vector<GroundTruthPair> out;
  for (const auto& gp : scene.gt_pairs) {
    auto a = visible.find(gp.a);
    auto b = visible.find(gp.b);
    if (a != visible.end() && b != visible.end() && a->second > 0 && b->second > 0)
      out.push_back(gp);
  }
  return out;
}

Part build_distractor(std::uint64_t seed, double size_scale) {
  Rng g(seed);
  const double s = std::clamp(size_scale, 0.25, 2.5);
  Part p;
  p.name = "clutter";
  if (g.uniform() < 0.5) {
    const Vec3 half(g.uniform(0.075, 0.225) * s, g.uniform(0.075, 0.225) * s,
                    g.uniform(0.075, 0.225) * s);
    const Point3 lo = -half, hi = half;
    const Vec3 d = hi - lo;
    p.faces.push_back(RectFace{lo, Vec3::UnitY(), Vec3::UnitZ(), d.y(), d.z()});
    p.faces.push_back(RectFace{{hi.x(), lo.y(), lo.z()}, Vec3::UnitY(), Vec3::UnitZ(), d.y(), d.z()});
    p.faces.push_back(RectFace{lo, Vec3::UnitX(), Vec3::UnitZ(), d.x(), d.z()});
    p.faces.push_back(RectFace{{lo.x(), hi.y(), lo.z()}, Vec3::UnitX(), Vec3::UnitZ(), d.x(), d.z()});
    p.faces.push_back(RectFace{lo, Vec3::UnitX(), Vec3::UnitY(), d.x(), d.y()});
    p.faces.push_back(RectFace{{lo.x(), lo.y(), hi.z()}, Vec3::UnitX(), Vec3::UnitY(), d.x(), d.y()});
  } else {
    const double r = g.uniform(0.08, 0.2) * s;
    const double h = g.uniform(0.3, 0.8) * s;
    p.faces.push_back(CylFace{{0, 0, -h / 2}, Vec3::UnitZ(), r, h});
    p.faces.push_back(DiskFace{{0, 0, -h / 2}, Vec3::UnitZ(), r});
    p.faces.push_back(DiskFace{{0, 0, h / 2}, Vec3::UnitZ(), r});
  }
  return p;
}

RenderedScene generate_scene(const ArticulatedObject& object, const SceneConfig& config,
                             std::uint64_t seed, Exec exec) {
  if (object.parts.empty()) throw Error(ErrorCode::invalid_input, "object has no parts");
  Rng vg(derive_seed(seed, {11}));
  std::vector<double> values;
  for (const auto& j : object.joints)
    values.push_back(j.kind == JointKind::fixed_joint ? 0.0 : vg.uniform(j.lo, j.hi));

  const Aabb bounds = object_bounds(object);
  const size_t n_obj = object.parts.size();

  RenderedScene best;
  double best_score = -1.0;

  for (int attempt = 0; attempt < std::max(1, config.max_camera_attempts); ++attempt) {
    const std::uint64_t aseed = derive_seed(seed, {13, static_cast<std::uint64_t>(attempt)});
    const Pose cam_pose = sample_camera(bounds, config, derive_seed(aseed, {0}));
    const RenderedScene baseline =
        render_scene(object, values, {}, {}, config.camera, cam_pose, exec);

    std::vector<Part> dparts;
    std::vector<Pose> dposes;
    const std::vector<Pose> poses_obj = part_poses(object, values);
    Rng pg(derive_seed(aseed, {1}));
    const Vec3 right = cam_pose.linear().col(0);
    const Vec3 down = cam_pose.linear().col(1);
    const Point3 eye = cam_pose.translation();
    for (int k = 0; k < config.distractors; ++k) {
      Part dp = build_distractor(derive_seed(aseed, {2, static_cast<std::uint64_t>(k)}),
                                 bounds.radius());
      dp.name = "clutter-" + std::to_string(k + 1);
      const size_t target = static_cast<size_t>(pg.below(n_obj));
      const PartBox tb = part_box(object.parts[target], poses_obj[target]);
      const Point3 center = tb.valid ? Point3(0.5 * (tb.lo + tb.hi)) : bounds.center();
      const double t = pg.uniform(0.38, 0.62);
      const PartBox db = part_box(dp, Pose::Identity());
      const double d_rad = db.valid ? 0.5 * (db.hi - db.lo).norm() : 0.1;
      const double p_rad = tb.valid ? 0.5 * (tb.hi - tb.lo).norm() : bounds.radius();
      const double psi = pg.uniform(0.0, 2.0 * kPi);
      const double mag = pg.uniform(0.5, 1.1) * (d_rad + 0.25 * p_rad);
      const Point3 pos =
          eye + t * (center - eye) + mag * (std::cos(psi) * right + std::sin(psi) * down);
      const Vec3 axis =
          Vec3(pg.normal(), pg.normal(), pg.normal()).normalized();
      Pose dp_pose = Pose::Identity();
      dp_pose.linear() = Eigen::AngleAxisd(pg.uniform(0.0, 2.0 * kPi), axis).toRotationMatrix();
      dp_pose.translation() = pos;
      dparts.push_back(std::move(dp));
      dposes.push_back(dp_pose);
    }

    RenderedScene scene =
        render_scene(object, values, dparts, dposes, config.camera, cam_pose, exec);

    // Invisible clutter would create pairs nothing can estimate; drop it.
    for (int pass = 0; pass < config.distractors; ++pass) {
      std::vector<Part> keep_p;
      std::vector<Pose> keep_q;
      bool dropped = false;
      for (size_t k = 0; k < dparts.size(); ++k) {
        if (scene.parts[n_obj + k].visible_pixels >= config.min_part_pixels) {
          keep_p.push_back(dparts[k]);
          keep_q.push_back(dposes[k]);
        } else {
          dropped = true;
        }
      }
      if (!dropped) break;
      dparts = std::move(keep_p);
      dposes = std::move(keep_q);
      scene = render_scene(object, values, dparts, dposes, config.camera, cam_pose, exec);
    }

    bool ok = true;
    double min_vis = std::numeric_limits<double>::infinity();
    bool occl_bad = false;
    for (size_t i = 0; i < n_obj; ++i) {
      const int vis_w = scene.parts[i].visible_pixels;
      const int vis_b = baseline.parts[i].visible_pixels;
      // Plane fits downstream key on the functional surface, so attachment
      // detail (handles, knobs) may not dominate a part's visible area.
      const int prim_w = scene.parts[i].primary_pixels;
      min_vis = std::min(min_vis, static_cast<double>(prim_w));
      if (prim_w < config.min_part_pixels || prim_w < 3 * (vis_w - prim_w)) ok = false;
      if (vis_b <= 0 || 1.0 - static_cast<double>(vis_w) / vis_b > config.max_occlusion) {
        ok = false;
        occl_bad = true;
      }
    }

    // A moving pair whose visible child pixels all hug its axis shows motion
    // below any classification gate; such viewpoints are rejected.
    double min_pair_flow = std::numeric_limits<double>::infinity();
    for (const auto& gp : scene.gt_pairs) {
      if (gp.cls == PairClass::prismatic) {
        min_pair_flow = std::min(min_pair_flow, kPrismaticTravelFraction * gp.max_travel);
      } else if (gp.cls == PairClass::revolute) {
        const double chord = 2.0 * std::sin(kRevoluteResidualAngle / 2.0);
        const Vec3 d = gp.axis.direction;
        double acc = 0.0;
        long count = 0;
        for (int y = 0; y < scene.depth.height; ++y) {
          for (int x = 0; x < scene.depth.width; ++x) {
            if (scene.seg(x, y) != gp.b || !(scene.depth(x, y) > 0)) continue;
            const Vec3 rel = deproject(config.camera, x, y, scene.depth(x, y)) - gp.axis.point;
            acc += chord * (rel - rel.dot(d) * d).norm();
            ++count;
          }
        }
        min_pair_flow = std::min(min_pair_flow, count > 0 ? acc / count : 0.0);
      }
    }
    if (min_pair_flow < config.min_mean_flow) ok = false;

    if (ok) return scene;
    double score = min_vis * (occl_bad ? 0.3 : 1.0);
    if (config.min_mean_flow > 0.0)
      score *= std::min(1.0, min_pair_flow / config.min_mean_flow);
    if (score > best_score) {
      best_score = score;
      best = std::move(scene);
    }
  }
  return best;
}

}  // namespace artic
