#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "artic/geometry.hpp"
#include "artic/rng.hpp"
#include "artic/scene.hpp"

namespace artic {

namespace {

constexpr double kPi = 3.14159265358979323846;

double deg(double d) { return d * kPi / 180.0; }

void add_rect(Part& part, const Point3& origin, const Vec3& u_dir, const Vec3& v_dir,
              double u_len, double v_len) {
  part.faces.push_back(RectFace{origin, u_dir.normalized(), v_dir.normalized(), u_len, v_len});
}

enum : unsigned {
  kBoxXNeg = 1u << 0,
  kBoxXPos = 1u << 1,
  kBoxYNeg = 1u << 2,
  kBoxYPos = 1u << 3,
  kBoxZNeg = 1u << 4,
  kBoxZPos = 1u << 5,
  kBoxAll = 0x3Fu,
};

void add_box(Part& part, const Point3& a, const Point3& b, unsigned faces = kBoxAll) {
  const Point3 lo = a.cwiseMin(b);
  const Point3 hi = a.cwiseMax(b);
  const Vec3 d = hi - lo;
  if (faces & kBoxXNeg) add_rect(part, lo, Vec3::UnitY(), Vec3::UnitZ(), d.y(), d.z());
  if (faces & kBoxXPos)
    add_rect(part, {hi.x(), lo.y(), lo.z()}, Vec3::UnitY(), Vec3::UnitZ(), d.y(), d.z());
  if (faces & kBoxYNeg) add_rect(part, lo, Vec3::UnitX(), Vec3::UnitZ(), d.x(), d.z());
  if (faces & kBoxYPos)
    add_rect(part, {lo.x(), hi.y(), lo.z()}, Vec3::UnitX(), Vec3::UnitZ(), d.x(), d.z());
  if (faces & kBoxZNeg) add_rect(part, lo, Vec3::UnitX(), Vec3::UnitY(), d.x(), d.y());
  if (faces & kBoxZPos)
    add_rect(part, {lo.x(), lo.y(), hi.z()}, Vec3::UnitX(), Vec3::UnitY(), d.x(), d.y());
}

// Everything appended since `from` is attachment detail, not the part's
// functional surface.
void mark_attachment(Part& part, size_t from) {
  part.face_primary.resize(part.faces.size(), 1);
  for (size_t i = from; i < part.face_primary.size(); ++i) part.face_primary[i] = 0;
}

// Bar handle facing +X: two posts plus the grip bar. The posts start 2cm
// clear of the mount plane so no handle point falls inside a plane-fit
// inlier band around the mount surface.
void add_bar_handle(Part& part, const Point3& center, const Vec3& along, double length,
                    double standoff) {
  const size_t from = part.faces.size();
  const Vec3 side(0.0, along.z(), along.y());
  const Vec3 out = Vec3::UnitX();
  const double post = 0.018;
  const double lift = 0.02;
  const double bar_depth = 0.032;
  const double bar_width = 0.026;
  const double inset = 0.03;
  for (double s : {-1.0, 1.0}) {
    const Point3 p = center + s * (length / 2 - inset) * along;
    add_box(part, p - (post / 2) * (along + side) + lift * out,
            p + (post / 2) * (along + side) + std::max(lift, standoff) * out);
  }
  add_box(part, center - (length / 2) * along - (bar_width / 2) * side + standoff * out,
          center + (length / 2) * along + (bar_width / 2) * side + (standoff + bar_depth) * out);
  mark_attachment(part, from);
}

void add_knob(Part& part, const Point3& center) {
  const size_t from = part.faces.size();
  const double half = 0.012;
  add_box(part, center - half * Vec3(0, 1, 1), center + half * Vec3(0, 1, 1) + Vec3(0.026, 0, 0));
  mark_attachment(part, from);
}

double extent_along(const Part& part, const Vec3& dir) {
  std::vector<Point3> pts;
  for (const auto& f : part.faces) {
    const auto fp = face_sample_points(f);
    pts.insert(pts.end(), fp.begin(), fp.end());
  }
  if (pts.empty()) return 0.0;
  double lo = pts[0].dot(dir), hi = lo;
  for (const auto& p : pts) {
    lo = std::min(lo, p.dot(dir));
    hi = std::max(hi, p.dot(dir));
  }
  return hi - lo;
}

void scale_object(ArticulatedObject& obj, double s) {
  for (auto& part : obj.parts) {
    for (auto& face : part.faces) {
      if (auto* r = std::get_if<RectFace>(&face)) {
        r->origin *= s;
        r->u_len *= s;
        r->v_len *= s;
      } else if (auto* c = std::get_if<CylFace>(&face)) {
        c->base *= s;
        c->radius *= s;
        c->height *= s;
      } else {
        auto& d = std::get<DiskFace>(face);
        d.center *= s;
        d.radius *= s;
      }
    }
  }
  for (auto& j : obj.joints) {
    j.axis.point *= s;
    j.span *= s;
    if (j.kind == JointKind::prismatic) {
      j.lo *= s;
      j.hi *= s;
    }
  }
  obj.scale = s;
}

// The reference is invalidated by the next new_part call; capture the id
// before creating another part.
Part& new_part(ArticulatedObject& obj, const std::string& name) {
  Part p;
  p.id = static_cast<int>(obj.parts.size()) + 1;
  p.name = name;
  obj.parts.push_back(std::move(p));
  return obj.parts.back();
}

void add_revolute(ArticulatedObject& obj, int parent, int child, const Point3& point,
                  const Vec3& dir, double hi) {
  Joint j;
  j.parent = parent;
  j.child = child;
  j.kind = JointKind::revolute;
  j.axis = Line3{point, canonical_direction(dir)};
  j.lo = 0.0;
  j.hi = hi;
  j.span = extent_along(obj.parts[child - 1], j.axis.direction);
  obj.joints.push_back(j);
}

void add_prismatic(ArticulatedObject& obj, int parent, int child, const Vec3& dir, double travel) {
  Joint j;
  j.parent = parent;
  j.child = child;
  j.kind = JointKind::prismatic;
  j.direction = dir.normalized();
  j.lo = 0.0;
  j.hi = travel;
  j.span = extent_along(obj.parts[child - 1], j.direction);
  obj.joints.push_back(j);
}

void add_fixed(ArticulatedObject& obj, int parent, int child) {
  Joint j;
  j.parent = parent;
  j.child = child;
  j.kind = JointKind::fixed_joint;
  j.span = extent_along(obj.parts[child - 1], Vec3::UnitZ());
  obj.joints.push_back(j);
}

ArticulatedObject build_door(Rng& g) {
  ArticulatedObject obj;
  obj.category = Category::door;
  const double w = g.uniform(0.8, 1.0);
  const double h = g.uniform(1.9, 2.2);
  const double b = g.uniform(0.08, 0.12);
  const bool two_panels = g.uniform() < 0.3;
  const bool transom = g.uniform() < 0.4;
  const bool hinge_left = g.uniform() < 0.5;
  const double gp = 0.012;
  const double xp = 0.012;

  Part& frame = new_part(obj, "frame");
  const int frame_id = frame.id;
  add_rect(frame, {0, -b, 0}, Vec3::UnitY(), Vec3::UnitZ(), b, h);
  add_rect(frame, {0, w, 0}, Vec3::UnitY(), Vec3::UnitZ(), b, h);
  add_rect(frame, {0, -b, h}, Vec3::UnitY(), Vec3::UnitZ(), w + 2 * b, b);
  double th = 0.0;
  if (transom) {
    th = g.uniform(0.25, 0.4);
    add_rect(frame, {0, -b, h + b}, Vec3::UnitY(), Vec3::UnitZ(), b, th);
    add_rect(frame, {0, w, h + b}, Vec3::UnitY(), Vec3::UnitZ(), b, th);
    add_rect(frame, {0, -b, h + b + th}, Vec3::UnitY(), Vec3::UnitZ(), w + 2 * b, b);
  }

  struct PanelSpec {
    double y0, y1;
    bool hinge_at_y0;
  };
  std::vector<PanelSpec> specs;
  if (two_panels) {
    specs.push_back({gp, w / 2 - gp / 2, true});
    specs.push_back({w / 2 + gp / 2, w - gp, false});
  } else {
    specs.push_back({gp, w - gp, hinge_left});
  }
  for (size_t k = 0; k < specs.size(); ++k) {
    const auto& sp = specs[k];
    Part& panel = new_part(obj, specs.size() == 1 ? "panel" : (k == 0 ? "panel-l" : "panel-r"));
    add_rect(panel, {xp, sp.y0, gp}, Vec3::UnitY(), Vec3::UnitZ(), sp.y1 - sp.y0, h - 2 * gp);
    const double y_hinge = sp.hinge_at_y0 ? sp.y0 : sp.y1;
    const double y_free = sp.hinge_at_y0 ? sp.y1 : sp.y0;
    const double yc = y_free + 0.09 * (y_hinge > y_free ? 1.0 : -1.0);
    const double zc = std::min(0.55 * h, h - 0.2);
    add_bar_handle(panel, {xp, yc, zc}, Vec3::UnitY(), 0.15, 0.045);
    const double hi = deg(g.uniform(90.0, 135.0));
    add_revolute(obj, frame_id, panel.id, {xp, y_hinge, h / 2}, Vec3::UnitZ(), hi);
  }
  if (transom) {
    Part& pane = new_part(obj, "transom");
    add_rect(pane, {xp, gp, h + b + gp}, Vec3::UnitY(), Vec3::UnitZ(), w - 2 * gp, th - 2 * gp);
    add_fixed(obj, frame_id, pane.id);
  }
  return obj;
}

ArticulatedObject build_window(Rng& g) {
  ArticulatedObject obj;
  obj.category = Category::window;
  const double w = g.uniform(0.9, 1.4);
  const double h = g.uniform(0.9, 1.3);
  const double b = g.uniform(0.06, 0.09);
  const bool vertical = g.uniform() < 0.35;
  const bool has_pane = g.uniform() < 0.85;
  const bool mirrored = g.uniform() < 0.5;
  const double travel_frac = g.uniform(0.35, 0.6);
  const double gp = 0.012;

  Part& frame = new_part(obj, "frame");
  const int frame_id = frame.id;
  add_rect(frame, {0, -b, -b}, Vec3::UnitY(), Vec3::UnitZ(), b, h + 2 * b);
  add_rect(frame, {0, w, -b}, Vec3::UnitY(), Vec3::UnitZ(), b, h + 2 * b);
  add_rect(frame, {0, 0, -b}, Vec3::UnitY(), Vec3::UnitZ(), w, b);
  add_rect(frame, {0, 0, h}, Vec3::UnitY(), Vec3::UnitZ(), w, b);

  Part& sash = new_part(obj, "sash");
  Vec3 dir;
  double travel = 0.0;
  if (vertical) {
    add_rect(sash, {0.014, gp, gp}, Vec3::UnitY(), Vec3::UnitZ(), w - 2 * gp, h / 2 - gp);
    dir = Vec3::UnitZ();
    travel = travel_frac * (h / 2);
  } else if (!mirrored) {
    add_rect(sash, {0.014, gp, gp}, Vec3::UnitY(), Vec3::UnitZ(), w / 2 - gp, h - 2 * gp);
    dir = Vec3::UnitY();
    travel = travel_frac * (w / 2);
  } else {
    add_rect(sash, {0.014, w / 2 + gp, gp}, Vec3::UnitY(), Vec3::UnitZ(), w / 2 - gp, h - 2 * gp);
    dir = -Vec3::UnitY();
    travel = travel_frac * (w / 2);
  }
  add_prismatic(obj, frame_id, sash.id, dir, travel);

  if (has_pane) {
    Part& pane = new_part(obj, "pane");
    if (vertical) {
      add_rect(pane, {0.028, gp, h / 2}, Vec3::UnitY(), Vec3::UnitZ(), w - 2 * gp, h / 2 - gp);
    } else if (!mirrored) {
      add_rect(pane, {0.028, w / 2, gp}, Vec3::UnitY(), Vec3::UnitZ(), w / 2 - gp, h - 2 * gp);
    } else {
      add_rect(pane, {0.028, gp, gp}, Vec3::UnitY(), Vec3::UnitZ(), w / 2 - gp, h - 2 * gp);
    }
    add_fixed(obj, frame_id, pane.id);
  }
  return obj;
}

ArticulatedObject build_faucet(Rng& g) {
  ArticulatedObject obj;
  obj.category = Category::faucet;
  const double r = g.uniform(0.035, 0.05);
  const double hb = g.uniform(0.14, 0.24);
  const double plate_r = g.uniform(1.7, 2.3) * r;
  const double tilt = deg(g.uniform(-5.0, 20.0));
  const double spout_len = g.uniform(0.16, 0.28);
  const double r2 = g.uniform(0.5, 0.65) * r;
  const bool two_handles = g.uniform() < 0.45;
  const double phi1 = deg(g.uniform(50.0, 130.0));

  Part& body = new_part(obj, "body");
  const int body_id = body.id;
  body.faces.push_back(CylFace{{0, 0, 0}, Vec3::UnitZ(), plate_r, 0.012});
  body.faces.push_back(DiskFace{{0, 0, 0.012}, Vec3::UnitZ(), plate_r});
  body.faces.push_back(CylFace{{0, 0, 0.012}, Vec3::UnitZ(), r, hb});
  body.faces.push_back(DiskFace{{0, 0, 0.012 + hb}, Vec3::UnitZ(), r});
  const Vec3 spout_dir(std::cos(tilt), 0.0, std::sin(tilt));
  const Point3 spout_base(0, 0, 0.012 + hb - r2 - 0.012);
  body.faces.push_back(CylFace{spout_base, spout_dir, r2, spout_len});
  const Point3 tip = spout_base + spout_len * spout_dir;
  body.faces.push_back(DiskFace{tip, spout_dir, r2});
  const double nozzle_h = 0.035;
  body.faces.push_back(CylFace{tip - Vec3(0, 0, nozzle_h), Vec3::UnitZ(), 0.8 * r2, nozzle_h});
  body.faces.push_back(DiskFace{tip - Vec3(0, 0, nozzle_h), Vec3::UnitZ(), 0.8 * r2});

  // The blade stands perpendicular to its axis so the residual rotation
  // sweeps it; a blade along the axis would only twist in place.
  const int n_handles = two_handles ? 2 : 1;
  for (int k = 0; k < n_handles; ++k) {
    const double phi = k == 0 ? phi1 : -phi1;
    const double ha = 0.012 + g.uniform(0.55, 0.8) * hb;
    const double len = g.uniform(0.16, 0.22);
    const double wf = g.uniform(0.035, 0.055);
    const double hi = deg(g.uniform(90.0, 180.0));
    const Vec3 radial(std::cos(phi), std::sin(phi), 0.0);
    Part& lever = new_part(obj, n_handles == 1 ? "lever" : (k == 0 ? "lever-l" : "lever-r"));
    const Point3 pivot = (r - 0.004) * radial + Vec3(0, 0, ha);
    add_rect(lever, pivot, Vec3::UnitZ(), radial, len, wf);
    add_revolute(obj, body_id, lever.id, pivot, radial, hi);
  }
  return obj;
}

ArticulatedObject build_dishwasher(Rng& g) {
  ArticulatedObject obj;
  obj.category = Category::dishwasher;
  const double w = g.uniform(0.55, 0.65);
  const double h = g.uniform(0.8, 0.92);
  const double d = g.uniform(0.55, 0.65);
  const double kick = g.uniform(0.1, 0.15);
  const bool control_panel = g.uniform() < 0.5;
  const double panel_h = control_panel ? g.uniform(0.06, 0.1) : 0.0;
  const double hi = deg(g.uniform(90.0, 135.0));
  const double m = 0.03;
  const double gp = 0.01;

  Part& body = new_part(obj, "body");
  const int body_id = body.id;
  add_box(body, {-d, 0, 0}, {0, w, h}, kBoxAll & ~kBoxXPos);
  add_rect(body, {0, 0, 0}, Vec3::UnitY(), Vec3::UnitZ(), m, h);
  add_rect(body, {0, w - m, 0}, Vec3::UnitY(), Vec3::UnitZ(), m, h);
  add_rect(body, {0, m, 0}, Vec3::UnitY(), Vec3::UnitZ(), w - 2 * m, kick);
  add_rect(body, {0, m, h - m}, Vec3::UnitY(), Vec3::UnitZ(), w - 2 * m, m);

  const double z_top = h - m - panel_h - (control_panel ? gp : 0.0);
  Part& door = new_part(obj, "door");
  add_rect(door, {0.006, m + gp, kick + gp}, Vec3::UnitY(), Vec3::UnitZ(), w - 2 * m - 2 * gp,
           z_top - kick - 2 * gp);
  add_bar_handle(door, {0.006, w / 2, z_top - gp - 0.05}, Vec3::UnitY(), 0.24, 0.04);
  add_revolute(obj, body_id, door.id, {0.006, w / 2, kick + gp}, Vec3::UnitY(), hi);

  if (control_panel) {
    Part& panel = new_part(obj, "control-panel");
    add_rect(panel, {0.006, m + gp, z_top + gp}, Vec3::UnitY(), Vec3::UnitZ(), w - 2 * m - 2 * gp,
             panel_h);
    add_fixed(obj, body_id, panel.id);
  }
  return obj;
}

ArticulatedObject build_fridge(Rng& g) {
  ArticulatedObject obj;
  obj.category = Category::fridge;
  const double w = g.uniform(0.6, 0.75);
  const double h = g.uniform(1.6, 1.9);
  const double d = g.uniform(0.55, 0.7);
  const bool french = g.uniform() < 0.55;
  const bool hinge_left = g.uniform() < 0.5;
  const double m = 0.02;
  const double gp = 0.01;
  const double xp = 0.006;

  Part& body = new_part(obj, "body");
  const int body_id = body.id;
  add_box(body, {-d, 0, 0}, {0, w, h}, kBoxAll & ~kBoxXPos);
  add_rect(body, {0, 0, 0}, Vec3::UnitY(), Vec3::UnitZ(), m, h);
  add_rect(body, {0, w - m, 0}, Vec3::UnitY(), Vec3::UnitZ(), m, h);
  add_rect(body, {0, m, 0}, Vec3::UnitY(), Vec3::UnitZ(), w - 2 * m, m);
  add_rect(body, {0, m, h - m}, Vec3::UnitY(), Vec3::UnitZ(), w - 2 * m, m);

  auto add_door = [&](const std::string& name, double y0, double y1, double z0, double z1,
                      bool hinge_at_y0, double hi_angle) {
    Part& door = new_part(obj, name);
    add_rect(door, {xp, y0, z0}, Vec3::UnitY(), Vec3::UnitZ(), y1 - y0, z1 - z0);
    const double y_hinge = hinge_at_y0 ? y0 : y1;
    const double y_free = hinge_at_y0 ? y1 : y0;
    const double bar_len = std::min(0.45, 0.6 * (z1 - z0));
    const double yc = y_free + 0.045 * (hinge_at_y0 ? -1.0 : 1.0);
    add_bar_handle(door, {xp, yc, (z0 + z1) / 2}, Vec3::UnitZ(), bar_len, 0.05);
    add_revolute(obj, body_id, door.id, {xp, y_hinge, (z0 + z1) / 2}, Vec3::UnitZ(), hi_angle);
  };

  if (french) {
    const double hi1 = deg(g.uniform(90.0, 135.0));
    const double hi2 = deg(g.uniform(90.0, 135.0));
    add_door("door-l", m + gp, w / 2 - gp / 2, m + gp, h - m - gp, true, hi1);
    add_door("door-r", w / 2 + gp / 2, w - m - gp, m + gp, h - m - gp, false, hi2);
  } else {
    const double split = h * g.uniform(0.70, 0.78);
    const double hi1 = deg(g.uniform(90.0, 135.0));
    const double hi2 = deg(g.uniform(90.0, 135.0));
    add_door("door", m + gp, w - m - gp, m + gp, split - gp, hinge_left, hi1);
    add_door("freezer-door", m + gp, w - m - gp, split + gp, h - m - gp, hinge_left, hi2);
  }
  return obj;
}

ArticulatedObject build_cabinet(Rng& g) {
  ArticulatedObject obj;
  obj.category = Category::cabinet;
  const double w = g.uniform(0.8, 1.1);
  const double h = g.uniform(0.75, 0.95);
  const double d = g.uniform(0.45, 0.55);
  const double split = w * g.uniform(0.45, 0.6);
  const int n_drawers = g.uniform() < 0.5 ? 2 : 3;
  const double door_hi = deg(g.uniform(90.0, 135.0));
  const double travel_frac = g.uniform(0.35, 0.6);
  const double m = 0.025;
  const double gp = 0.01;
  const double stile = 0.012;
  const double rail = 0.02;
  const double xp = 0.006;
  const double tray_depth = 0.85 * d;

  Part& body = new_part(obj, "body");
  const int body_id = body.id;
  add_box(body, {-d, 0, 0}, {0, w, h}, kBoxAll & ~kBoxXPos);
  add_rect(body, {0, 0, 0}, Vec3::UnitY(), Vec3::UnitZ(), m, h);
  add_rect(body, {0, w - m, 0}, Vec3::UnitY(), Vec3::UnitZ(), m, h);
  add_rect(body, {0, m, 0}, Vec3::UnitY(), Vec3::UnitZ(), w - 2 * m, m);
  add_rect(body, {0, m, h - m}, Vec3::UnitY(), Vec3::UnitZ(), w - 2 * m, m);
  add_rect(body, {0, split - stile, m}, Vec3::UnitY(), Vec3::UnitZ(), 2 * stile, h - 2 * m);

  const double band_h = (h - 2 * m - (n_drawers - 1) * rail) / n_drawers;
  for (int k = 1; k < n_drawers; ++k) {
    const double zb = m + k * (band_h + rail);
    add_rect(body, {0, m, zb - rail}, Vec3::UnitY(), Vec3::UnitZ(), split - stile - m, rail);
  }
  for (int k = 0; k < n_drawers; ++k) {
    const double zb = m + k * (band_h + rail);
    Part& drawer = new_part(obj, "drawer-" + std::to_string(k + 1));
    const double y0 = m + gp, y1 = split - stile - gp;
    const double z0 = zb + gp, z1 = zb + band_h - gp;
    add_rect(drawer, {xp, y0, z0}, Vec3::UnitY(), Vec3::UnitZ(), y1 - y0, z1 - z0);
    const double ty0 = y0 + 0.012, ty1 = y1 - 0.012;
    const double tz1 = z0 + 0.55 * (z1 - z0);
    add_rect(drawer, {xp - tray_depth, ty0, z0}, Vec3::UnitX(), Vec3::UnitZ(), tray_depth, tz1 - z0);
    add_rect(drawer, {xp - tray_depth, ty1, z0}, Vec3::UnitX(), Vec3::UnitZ(), tray_depth, tz1 - z0);
    add_rect(drawer, {xp - tray_depth, ty0, z0}, Vec3::UnitX(), Vec3::UnitY(), tray_depth, ty1 - ty0);
    add_rect(drawer, {xp - tray_depth, ty0, z0}, Vec3::UnitY(), Vec3::UnitZ(), ty1 - ty0, tz1 - z0);
    add_knob(drawer, {xp, (y0 + y1) / 2, (z0 + z1) / 2});
    add_prismatic(obj, body_id, drawer.id, Vec3::UnitX(), travel_frac * tray_depth);
  }

  Part& door = new_part(obj, "door");
  const double dy0 = split + stile + gp, dy1 = w - m - gp;
  add_rect(door, {xp, dy0, m + gp}, Vec3::UnitY(), Vec3::UnitZ(), dy1 - dy0, h - 2 * m - 2 * gp);
  add_bar_handle(door, {xp, dy0 + 0.05, h / 2}, Vec3::UnitZ(), std::min(0.3, 0.5 * h), 0.045);
  add_revolute(obj, body_id, door.id, {xp, dy1, h / 2}, Vec3::UnitZ(), door_hi);
  return obj;
}

}  // namespace

std::vector<Point3> face_sample_points(const Face& face) {
  std::vector<Point3> out;
  if (const auto* r = std::get_if<RectFace>(&face)) {
    out.push_back(r->origin);
    out.push_back(r->origin + r->u_len * r->u_dir);
    out.push_back(r->origin + r->v_len * r->v_dir);
    out.push_back(r->origin + r->u_len * r->u_dir + r->v_len * r->v_dir);
    return out;
  }
  auto ring = [&out](const Point3& c, const Vec3& axis, double radius) {
    const Vec3 u = any_orthogonal(axis);
    const Vec3 v = axis.normalized().cross(u);
    for (int k = 0; k < 8; ++k) {
      const double a = 2.0 * kPi * k / 8;
      out.push_back(c + radius * (std::cos(a) * u + std::sin(a) * v));
    }
  };
  if (const auto* c = std::get_if<CylFace>(&face)) {
    ring(c->base, c->axis_dir, c->radius);
    ring(c->base + c->height * c->axis_dir.normalized(), c->axis_dir, c->radius);
    return out;
  }
  const auto& d = std::get<DiskFace>(face);
  out.push_back(d.center);
  ring(d.center, d.normal, d.radius);
  return out;
}

const char* category_name(Category c) {
  switch (c) {
    case Category::door: return "door";
    case Category::window: return "window";
    case Category::faucet: return "faucet";
    case Category::dishwasher: return "dishwasher";
    case Category::fridge: return "fridge";
    case Category::cabinet: return "cabinet";
  }
  return "door";
}

Category category_from_name(const std::string& name) {
  for (int k = 0; k < kNumCategories; ++k) {
    const auto c = static_cast<Category>(k);
    if (name == category_name(c)) return c;
  }
  throw Error(ErrorCode::invalid_input, "unknown category '" + name + "'");
}

const char* pair_class_name(PairClass c) {
  switch (c) {
    case PairClass::revolute: return "revolute";
    case PairClass::prismatic: return "prismatic";
    case PairClass::fixed_joint: return "fixed";
    case PairClass::unconnected: return "unconnected";
  }
  return "unconnected";
}

PairClass pair_class_from_name(const std::string& name) {
  for (PairClass c : {PairClass::revolute, PairClass::prismatic, PairClass::fixed_joint,
                      PairClass::unconnected}) {
    if (name == pair_class_name(c)) return c;
  }
  throw Error(ErrorCode::invalid_input, "unknown pair class '" + name + "'");
}

ArticulatedObject build_object(Category category, std::uint64_t seed) {
  Rng g(derive_seed(seed, {static_cast<std::uint64_t>(category), 0x6f626a65u}));
  ArticulatedObject obj;
  switch (category) {
    case Category::door: obj = build_door(g); break;
    case Category::window: obj = build_window(g); break;
    case Category::faucet: obj = build_faucet(g); break;
    case Category::dishwasher: obj = build_dishwasher(g); break;
    case Category::fridge: obj = build_fridge(g); break;
    case Category::cabinet: obj = build_cabinet(g); break;
  }
  scale_object(obj, g.uniform(0.5, 2.0));
  return obj;
}

Pose joint_twist(const Joint& joint, double value) {
  Pose t = Pose::Identity();
  if (joint.kind == JointKind::revolute) {
    const Eigen::AngleAxisd rot(value, joint.axis.direction.normalized());
    t.linear() = rot.toRotationMatrix();
    t.translation() = joint.axis.point - t.linear() * joint.axis.point;
  } else if (joint.kind == JointKind::prismatic) {
    t.translation() = value * joint.direction;
  }
  return t;
}

std::vector<Pose> part_poses(const ArticulatedObject& object, const std::vector<double>& values) {
  if (values.size() != object.joints.size())
    throw Error(ErrorCode::shape_mismatch, "expected " + std::to_string(object.joints.size()) +
                                               " joint values, got " + std::to_string(values.size()));
  std::unordered_map<int, size_t> index;
  for (size_t i = 0; i < object.parts.size(); ++i) index[object.parts[i].id] = i;
  std::vector<Pose> poses(object.parts.size(), Pose::Identity());
  std::vector<char> assigned(object.parts.size(), 0);
  if (!object.parts.empty()) assigned[0] = 1;
  for (size_t j = 0; j < object.joints.size(); ++j) {
    const Joint& joint = object.joints[j];
    const double v = values[j];
    const double lo = joint.kind == JointKind::fixed_joint ? 0.0 : joint.lo;
    const double hi = joint.kind == JointKind::fixed_joint ? 0.0 : joint.hi;
    if (!(v >= lo - 1e-12 && v <= hi + 1e-12))
      throw Error(ErrorCode::joint_limit, "joint " + std::to_string(j) + " value " +
                                              std::to_string(v) + " outside [" + std::to_string(lo) +
                                              ", " + std::to_string(hi) + "]");
    auto pit = index.find(joint.parent);
    auto cit = index.find(joint.child);
    if (pit == index.end() || cit == index.end())
      throw Error(ErrorCode::missing_entity, "joint references unknown part id");
    if (!assigned[pit->second])
      throw Error(ErrorCode::invalid_input, "joints are not in parent-first order");
    poses[cit->second] = poses[pit->second] * joint_twist(joint, v);
    assigned[cit->second] = 1;
  }
  return poses;
}

Aabb object_bounds(const ArticulatedObject& object) {
  std::vector<Point3> pts;
  for (const auto& part : object.parts)
    for (const auto& face : part.faces) {
      const auto fp = face_sample_points(face);
      pts.insert(pts.end(), fp.begin(), fp.end());
    }
  Aabb box;
  if (pts.empty()) return box;
  box.lo = box.hi = pts[0];
  for (const auto& p : pts) {
    box.lo = box.lo.cwiseMin(p);
    box.hi = box.hi.cwiseMax(p);
  }
  return box;
}

Pose sample_camera(const Aabb& bounds, const SceneConfig& config, std::uint64_t seed) {
  Rng g(seed);
  const double radius = bounds.radius();
  double r0 = config.radius_lo, r1 = config.radius_hi;
  if (r0 <= 0.0) r0 = std::max(1.7 * radius, 0.55);
  if (r1 <= 0.0) r1 = std::max(2.8 * radius, 1.0);
  if (r1 < r0) r1 = r0;
  const double azim = deg(g.uniform(-config.azimuth_limit_deg, config.azimuth_limit_deg));
  const double s0 = std::sin(deg(config.elevation_lo_deg));
  const double s1 = std::sin(deg(config.elevation_hi_deg));
  const double elev = std::asin(g.uniform(s0, s1));
  const double dist = g.uniform(r0, r1);
  const Point3 center = bounds.center();
  const Vec3 dir(std::cos(elev) * std::cos(azim), std::cos(elev) * std::sin(azim), std::sin(elev));
  const Point3 eye = center + dist * dir;
  const double jitter = config.lookat_jitter_frac * bounds.extent();
  const Point3 target =
      center + jitter * Vec3(g.uniform(-0.5, 0.5), g.uniform(-0.5, 0.5), g.uniform(-0.5, 0.5));

  const Vec3 forward = (target - eye).normalized();
  Vec3 right = forward.cross(Vec3::UnitZ());
  if (right.norm() < 1e-9) right = forward.cross(Vec3::UnitY());
  right.normalize();
  const Vec3 down = forward.cross(right);
  Pose cam = Pose::Identity();
  Eigen::Matrix3d rot;
  rot.col(0) = right;
  rot.col(1) = down;
  rot.col(2) = forward;
  cam.linear() = rot;
  cam.translation() = eye;
  return cam;
}

}  // namespace artic
