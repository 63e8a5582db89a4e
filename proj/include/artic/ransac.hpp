#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "artic/parallel.hpp"
#include "artic/types.hpp"

namespace artic {

struct RansacParams {
  int iterations = 1000;
  double inlier_threshold = 0.01;  // meters, point-to-plane
  int min_inliers = 0;             // 0 resolves to max(3, 10% of points)
  std::uint64_t seed = 0;
};

/// The floor used when min_inliers is left at 0: max(3, point_count / 10).
int default_min_inliers(std::size_t point_count);

struct PlaneFit {
  Plane plane;
  std::vector<int> inlier_indices;  // ascending
  double inlier_rmse = 0.0;
  int hypothesis_index = -1;  // winning minimal-sample attempt
};

/// Best-consensus plane over `iterations` minimal 3-point samples drawn from a
/// deterministic stream seeded by params.seed. Collinear samples are skipped
/// without consuming the budget. Hypotheses are ranked by (inlier count,
/// -rmse, lowest attempt index); the winner is re-fit by least squares over
/// its inliers and the reported inlier set is taken against the re-fit plane.
/// Identical inputs and seed give bit-identical results in both exec modes.
PlaneFit ransac_plane(std::span<const Point3> points, const RansacParams& params,
                      Exec exec = Exec::parallel);

}  // namespace artic
