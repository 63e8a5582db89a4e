#pragma once

#include "artic/image.hpp"
#include "artic/scene.hpp"

namespace artic {

/// Probe displacement magnitudes for residual-flow rendering.
inline constexpr double kRevoluteResidualAngle = 0.5235987755982988;  // 30 degrees
inline constexpr double kPrismaticTravelFraction = 0.3;               // of max_travel

/// +1 when a displacement of `magnitude` toward the upper limit stays within
/// [lo, hi], else -1 when the downward displacement fits. Throws joint_limit
/// when neither direction admits the displacement.
int rotation_sign(double value, double lo, double hi, double magnitude);

struct PairLabel {
  bool connected = false;
  PairClass cls = PairClass::unconnected;
  Line3 axis;                      // revolute, camera frame
  Vec3 direction = Vec3::UnitX();  // prismatic, camera frame, unit
  double magnitude = 0.0;          // signed probe displacement, rad or m
};

struct PairFlow {
  FlowImage flow;
  PairLabel label;
};

/// Residual 3D flow of part b relative to part a: the camera-frame
/// displacement each visible surface point of b undergoes when the joint
/// moves by the probe magnitude (30 deg revolute, 0.3 * max_travel
/// prismatic, zero for fixed and unconnected pairs). Supported exactly on
/// b's visible pixels; prismatic flow is the same vector at every pixel.
PairFlow gt_flow(const RenderedScene& scene, int a, int b);

struct FlowLoss {
  double se = 0.0;        // sum of squared endpoint errors
  double ce = 0.0;        // connectivity cross-entropy
  double weighted = 0.0;  // 0.6 * gt_connected * se + 0.4 * ce
  bool clamped = false;   // pred_prob hit the log clamp
};

/// se = sum_p ||gt_p - pred_p||^2 over all pixels;
/// ce = -[y ln p + (1-y) ln(1-p)] with p clamped to [1e-12, 1 - 1e-12];
/// weighted = 0.6 * y * se + 0.4 * ce. The flow term only contributes for
/// ground-truth-connected pairs.
FlowLoss flow_loss(const FlowImage& gt, const FlowImage& pred, bool gt_connected, double pred_prob);

}  // namespace artic
