#include <cmath>

#include "artic/flow.hpp"
#include "artic/geometry.hpp"

namespace artic {

int rotation_sign(double value, double lo, double hi, double magnitude) {
  if (!(magnitude > 0.0))
    throw Error(ErrorCode::invalid_input, "probe magnitude must be positive");
  if (value + magnitude <= hi + 1e-12) return 1;
  if (value - magnitude >= lo - 1e-12) return -1;
  throw Error(ErrorCode::joint_limit, "joint travel shorter than the probe displacement");
}

PairFlow gt_flow(const RenderedScene& scene, int a, int b) {
  if (a == b) throw Error(ErrorCode::invalid_input, "pair needs two distinct parts");
  bool found_a = false, found_b = false;
  for (const auto& p : scene.parts) {
    found_a |= p.id == a;
    found_b |= p.id == b;
  }
  if (!found_a) throw Error(ErrorCode::missing_entity, "part " + std::to_string(a));
  if (!found_b) throw Error(ErrorCode::missing_entity, "part " + std::to_string(b));

  const GroundTruthPair* pair = nullptr;
  for (const auto& gp : scene.gt_pairs)
    if ((gp.a == a && gp.b == b) || (gp.a == b && gp.b == a)) {
      pair = &gp;
      break;
    }
  if (pair == nullptr) throw Error(ErrorCode::missing_entity, "pair not present in the scene");

  PairFlow out;
  out.flow = FlowImage(scene.depth.width, scene.depth.height);
  out.label.connected = pair->cls != PairClass::unconnected;
  out.label.cls = pair->cls;

  double signed_mag = 0.0;
  if (pair->cls == PairClass::revolute || pair->cls == PairClass::prismatic) {
    const double mag = pair->cls == PairClass::revolute
                           ? kRevoluteResidualAngle
                           : kPrismaticTravelFraction * pair->max_travel;
    signed_mag = rotation_sign(pair->value, pair->lo, pair->hi, mag) * mag;
    // Asking for the parent's motion relative to the child inverts the twist.
    if (b == pair->a) signed_mag = -signed_mag;
    out.label.axis = pair->axis;
    out.label.direction = pair->direction;
    out.label.magnitude = signed_mag;
  }

  const Vec3 step = pair->cls == PairClass::prismatic ? Vec3(signed_mag * pair->direction)
                                                      : Vec3::Zero();
  for (int y = 0; y < scene.seg.height; ++y) {
    for (int x = 0; x < scene.seg.width; ++x) {
      if (scene.seg(x, y) != b) continue;
      const float d = scene.depth(x, y);
      if (!(d > 0.0f)) continue;
      switch (pair->cls) {
        case PairClass::revolute: {
          const Point3 p = deproject(scene.camera, x, y, d);
          out.flow.set(x, y, rotate_about_axis(p, pair->axis, signed_mag) - p);
          break;
        }
        case PairClass::prismatic:
          out.flow.set(x, y, step);
          break;
        default:
          out.flow.set(x, y, Vec3::Zero());
          break;
      }
    }
  }
  return out;
}

FlowLoss flow_loss(const FlowImage& gt, const FlowImage& pred, bool gt_connected,
                   double pred_prob) {
  if (gt.width != pred.width || gt.height != pred.height)
    throw Error(ErrorCode::shape_mismatch, "flow images differ in size");
  if (!(pred_prob >= 0.0 && pred_prob <= 1.0))
    throw Error(ErrorCode::invalid_input, "probability outside [0, 1]");

  FlowLoss loss;
  for (size_t i = 0; i < gt.data.size(); ++i) {
    const double d = gt.data[i] - pred.data[i];
    loss.se += d * d;
  }
  constexpr double kClamp = 1e-12;
  double p = pred_prob;
  if (p < kClamp) {
    p = kClamp;
    loss.clamped = true;
  } else if (p > 1.0 - kClamp) {
    p = 1.0 - kClamp;
    loss.clamped = true;
  }
  const double y = gt_connected ? 1.0 : 0.0;
  loss.ce = -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
  loss.weighted = 0.6 * y * loss.se + 0.4 * loss.ce;
  return loss;
}

}  // namespace artic
