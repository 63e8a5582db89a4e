#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "artic/image.hpp"
#include "artic/parallel.hpp"
#include "artic/ransac.hpp"
#include "artic/scene.hpp"

namespace artic {

struct InferenceParams {
  /// Mean per-pixel flow norm below which the pair is declared fixed, meters.
  double eps0 = 0.01;
  /// Plane-normal parallelism gate: prismatic when dot > 1 - eps1.
  double eps1 = 1.0 - std::cos(5.0 * 3.14159265358979323846 / 180.0);
  /// min_inliers == 0 resolves to max(3, 10% of the cloud) per fit.
  RansacParams ransac;
  /// Consensus fraction below which the estimate is flagged low-confidence.
  double low_confidence_fraction = 0.30;
};

struct EstimateDiagnostics {
  double mean_flow_norm = 0.0;
  int mask_pixels = 0;
  int cloud_points = 0;
  double pre_inlier_fraction = 0.0;
  double post_inlier_fraction = 0.0;
  double pre_rmse = 0.0;
  double post_rmse = 0.0;
  double normals_dot = 0.0;
  bool low_confidence = false;
  Vec3 mean_flow = Vec3::Zero();
};

struct ArticulationEstimate {
  PairClass kind = PairClass::unconnected;
  std::optional<Line3> axis;       // revolute; canonical direction
  std::optional<Vec3> direction;   // prismatic; unit, canonical
  EstimateDiagnostics diag;
};

/// Classifies the articulation of the masked part from depth plus residual
/// 3D flow: below the flow gate it is fixed; otherwise planes are fit to the
/// deprojected cloud before and after adding the flow, near-parallel normals
/// mean prismatic (direction = normalized mean flow over the mask), anything
/// else revolute (axis = intersection of the two planes).
ArticulationEstimate infer_articulation(const DepthImage& depth, const Image<std::uint8_t>& mask,
                                        const FlowImage& flow, const CameraIntrinsics& cam,
                                        const InferenceParams& params, Exec exec = Exec::parallel);

/// Pair-level wrapper: part b is the moving candidate, its mask taken from
/// the segmentation. connected_prob < 0.5 short-circuits to unconnected.
ArticulationEstimate infer_pair(const DepthImage& depth, const SegImage& seg, const FlowImage& flow,
                                int a, int b, double connected_prob, const CameraIntrinsics& cam,
                                const InferenceParams& params, Exec exec = Exec::parallel);

/// One per-pair prediction handed to chain recovery.
struct PairPrediction {
  int a = 0;
  int b = 0;
  double connected_prob = 0.0;
  FlowImage flow;
};

struct KinematicEdge {
  int a = 0;
  int b = 0;
  ArticulationEstimate estimate;
};

struct KinematicGraph {
  std::vector<int> part_ids;  // visible parts, ascending
  std::vector<KinematicEdge> edges;
};

/// Runs infer_pair over every prediction with connected_prob >= 0.5. The
/// predictions must cover each unordered pair of visible parts exactly once.
KinematicGraph recover_chain(const DepthImage& depth, const SegImage& seg,
                             const std::vector<PairPrediction>& predictions,
                             const CameraIntrinsics& cam, const InferenceParams& params,
                             Exec exec = Exec::parallel);

}  // namespace artic
