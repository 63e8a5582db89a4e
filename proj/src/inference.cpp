#include <algorithm>
#include <set>

#include "artic/geometry.hpp"
#include "artic/inference.hpp"
#include "artic/rng.hpp"

namespace artic {

namespace {

void validate(const InferenceParams& p) {
  if (!(p.eps0 > 0.0)) throw Error(ErrorCode::invalid_input, "eps0 must be positive");
  if (!(p.eps1 >= 1e-8 && p.eps1 < 1.0))
    throw Error(ErrorCode::invalid_input, "eps1 outside [1e-8, 1)");
  if (!(p.low_confidence_fraction >= 0.0 && p.low_confidence_fraction <= 1.0))
    throw Error(ErrorCode::invalid_input, "low-confidence fraction outside [0, 1]");
}

PlaneFit fit_or_rethrow(std::span<const Point3> pts, const RansacParams& params, Exec exec) {
  try {
    return ransac_plane(pts, params, exec);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::no_consensus)
      throw Error(ErrorCode::plane_fit_failed, e.what());
    throw;
  }
}

}  // namespace

ArticulationEstimate infer_articulation(const DepthImage& depth, const Image<std::uint8_t>& mask,
                                        const FlowImage& flow, const CameraIntrinsics& cam,
                                        const InferenceParams& params, Exec exec) {
  validate(params);
  if (depth.width != mask.width || depth.height != mask.height || depth.width != flow.width ||
      depth.height != flow.height)
    throw Error(ErrorCode::shape_mismatch, "depth, mask, and flow sizes differ");

  ArticulationEstimate est;
  long mask_pixels = 0;
  double norm_sum = 0.0;
  Vec3 flow_sum = Vec3::Zero();
  std::vector<Point3> cloud, moved;
  for (int y = 0; y < depth.height; ++y) {
    for (int x = 0; x < depth.width; ++x) {
      if (!mask(x, y)) continue;
      ++mask_pixels;
      const Vec3 f = flow.at(x, y);
      norm_sum += f.norm();
      flow_sum += f;
      const float d = depth(x, y);
      if (!(d > 0.0f)) continue;
      const Point3 p = deproject(cam, x, y, d);
      cloud.push_back(p);
      moved.push_back(p + f);
    }
  }
  if (mask_pixels == 0) throw Error(ErrorCode::missing_entity, "empty candidate mask");

  est.diag.mask_pixels = static_cast<int>(mask_pixels);
  est.diag.cloud_points = static_cast<int>(cloud.size());
  est.diag.mean_flow_norm = norm_sum / static_cast<double>(mask_pixels);
  est.diag.mean_flow = flow_sum / static_cast<double>(mask_pixels);

  if (est.diag.mean_flow_norm < params.eps0) {
    est.kind = PairClass::fixed_joint;
    return est;
  }

  RansacParams rp = params.ransac;
  if (rp.min_inliers <= 0) rp.min_inliers = default_min_inliers(cloud.size());
  if (cloud.size() < 3 || static_cast<int>(cloud.size()) < rp.min_inliers)
    throw Error(ErrorCode::insufficient_points,
                "cloud of " + std::to_string(cloud.size()) + " points, need " +
                    std::to_string(std::max(3, rp.min_inliers)));

  // Both fits share one sample stream: a rigidly moved cloud then yields the
  // moved plane, so the pre/post comparison is equivariant by construction.
  const PlaneFit pre = fit_or_rethrow(cloud, rp, exec);
  const PlaneFit post = fit_or_rethrow(moved, rp, exec);

  const double n = static_cast<double>(cloud.size());
  est.diag.pre_inlier_fraction = static_cast<double>(pre.inlier_indices.size()) / n;
  est.diag.post_inlier_fraction = static_cast<double>(post.inlier_indices.size()) / n;
  est.diag.pre_rmse = pre.inlier_rmse;
  est.diag.post_rmse = post.inlier_rmse;
  est.diag.normals_dot = pre.plane.normal.dot(post.plane.normal);
  est.diag.low_confidence = est.diag.pre_inlier_fraction < params.low_confidence_fraction;

  if (est.diag.normals_dot > 1.0 - params.eps1) {
    const Vec3 mean = est.diag.mean_flow;
    if (mean.norm() < 1e-12)
      throw Error(ErrorCode::degenerate_geometry, "mean flow vanishes for a moving pair");
    est.kind = PairClass::prismatic;
    est.direction = canonical_direction(mean);
    return est;
  }
  est.kind = PairClass::revolute;
  est.axis = plane_intersection(pre.plane, post.plane);
  return est;
}

ArticulationEstimate infer_pair(const DepthImage& depth, const SegImage& seg, const FlowImage& flow,
                                int a, int b, double connected_prob, const CameraIntrinsics& cam,
                                const InferenceParams& params, Exec exec) {
  validate(params);
  if (a == b) throw Error(ErrorCode::invalid_input, "pair needs two distinct parts");
  if (!(connected_prob >= 0.0 && connected_prob <= 1.0))
    throw Error(ErrorCode::invalid_input, "probability outside [0, 1]");
  if (depth.width != seg.width || depth.height != seg.height)
    throw Error(ErrorCode::shape_mismatch, "depth and segmentation sizes differ");

  long count_a = 0, count_b = 0;
  Image<std::uint8_t> mask(seg.width, seg.height);
  for (int y = 0; y < seg.height; ++y)
    for (int x = 0; x < seg.width; ++x) {
      const int id = seg(x, y);
      if (id == a) ++count_a;
      if (id == b) {
        ++count_b;
        mask(x, y) = 1;
      }
    }
  if (count_a == 0) throw Error(ErrorCode::missing_entity, "part " + std::to_string(a));
  if (count_b == 0) throw Error(ErrorCode::missing_entity, "part " + std::to_string(b));

  if (connected_prob < 0.5) {
    ArticulationEstimate est;
    est.kind = PairClass::unconnected;
    est.diag.mask_pixels = static_cast<int>(count_b);
    return est;
  }
  return infer_articulation(depth, mask, flow, cam, params, exec);
}

KinematicGraph recover_chain(const DepthImage& depth, const SegImage& seg,
                             const std::vector<PairPrediction>& predictions,
                             const CameraIntrinsics& cam, const InferenceParams& params,
                             Exec exec) {
  validate(params);
  std::set<int> ids;
  for (const auto v : seg.data)
    if (v != 0) ids.insert(v);

  KinematicGraph graph;
  graph.part_ids.assign(ids.begin(), ids.end());

  std::set<std::pair<int, int>> seen;
  for (const auto& p : predictions) {
    if (p.a == p.b) throw Error(ErrorCode::invalid_input, "pair needs two distinct parts");
    if (!ids.count(p.a)) throw Error(ErrorCode::missing_entity, "part " + std::to_string(p.a));
    if (!ids.count(p.b)) throw Error(ErrorCode::missing_entity, "part " + std::to_string(p.b));
    const auto key = std::minmax(p.a, p.b);
    if (!seen.insert(key).second)
      throw Error(ErrorCode::invalid_input, "duplicate prediction for pair " +
                                                std::to_string(key.first) + "-" +
                                                std::to_string(key.second));
  }
  const size_t expected = graph.part_ids.size() * (graph.part_ids.size() - 1) / 2;
  if (seen.size() < expected)
    throw Error(ErrorCode::incomplete_input,
                "predictions cover " + std::to_string(seen.size()) + " of " +
                    std::to_string(expected) + " pairs");

  for (const auto& p : predictions) {
    if (p.connected_prob < 0.5) continue;
    KinematicEdge edge;
    edge.a = p.a;
    edge.b = p.b;
    edge.estimate = infer_pair(depth, seg, p.flow, p.a, p.b, p.connected_prob, cam, params, exec);
    graph.edges.push_back(std::move(edge));
  }
  return graph;
}

}  // namespace artic
