#include "artic/ransac.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "artic/geometry.hpp"
#include "artic/rng.hpp"

namespace artic {
namespace {

struct Hypothesis {
  int attempt = 0;
  Plane plane;
};

struct Score {
  int count = 0;
  double rmse = 0.0;
  int attempt = 0;
};

// Strict total order (attempt indices are unique), so any reduction order
// yields the same winner.
bool better(const Score& a, const Score& b) {
  if (a.count != b.count) return a.count > b.count;
  if (a.rmse != b.rmse) return a.rmse < b.rmse;
  return a.attempt < b.attempt;
}

Score score_hypothesis(std::span<const Point3> points, const Plane& plane, double threshold,
                       int attempt) {
  int count = 0;
  double sumsq = 0.0;
  for (const Point3& p : points) {
    const double d = plane_signed_distance(plane, p);
    if (std::abs(d) <= threshold) {
      ++count;
      sumsq += d * d;
    }
  }
  Score s;
  s.count = count;
  s.rmse = count > 0 ? std::sqrt(sumsq / count) : 0.0;
  s.attempt = attempt;
  return s;
}

}  // namespace

int default_min_inliers(std::size_t point_count) {
  return std::max<std::size_t>(3, point_count / 10);
}

PlaneFit ransac_plane(std::span<const Point3> points, const RansacParams& params, Exec exec) {
  if (params.iterations < 1 || !(params.inlier_threshold > 0.0) ||
      (params.min_inliers != 0 && params.min_inliers < 3)) {
    throw Error(ErrorCode::invalid_input, "ransac params out of range");
  }
  const int n = int(points.size());
  const int min_inliers =
      params.min_inliers == 0 ? default_min_inliers(points.size()) : params.min_inliers;
  if (n < 3 || n < min_inliers) {
    throw Error(ErrorCode::insufficient_points, "ransac needs >= max(3, min_inliers) points");
  }

  // Minimal samples come from per-attempt streams, so validity of one attempt
  // never depends on the draws of another.
  std::vector<Hypothesis> hypotheses;
  hypotheses.reserve(params.iterations);
  const long attempt_cap = long(params.iterations) * 64 + 64;
  for (long attempt = 0; attempt < attempt_cap && int(hypotheses.size()) < params.iterations;
       ++attempt) {
    Rng rng(derive_seed(params.seed, {std::uint64_t(attempt)}));
    std::array<int, 3> idx;
    idx[0] = int(rng.below(n));
    do {
      idx[1] = int(rng.below(n));
    } while (idx[1] == idx[0]);
    do {
      idx[2] = int(rng.below(n));
    } while (idx[2] == idx[0] || idx[2] == idx[1]);

    const Vec3 ab = points[idx[1]] - points[idx[0]];
    const Vec3 ac = points[idx[2]] - points[idx[0]];
    const Vec3 cross = ab.cross(ac);
    // Collinear within 1e-9 (scale-free): skipped, budget untouched.
    if (cross.norm() <= 1e-9 * ab.norm() * ac.norm()) continue;

    Hypothesis h;
    h.attempt = int(attempt);
    h.plane = make_plane(cross, cross.dot(points[idx[0]]));
    hypotheses.push_back(h);
  }
  if (hypotheses.empty()) {
    throw Error(ErrorCode::no_consensus, "no non-degenerate minimal sample found");
  }

  Score best;
  best.count = -1;
  if (exec == Exec::serial) {
    for (const Hypothesis& h : hypotheses) {
      const Score s = score_hypothesis(points, h.plane, params.inlier_threshold, h.attempt);
      if (best.count < 0 || better(s, best)) best = s;
    }
  } else {
    std::vector<Score> thread_best(std::size_t(max_threads()), Score{-1, 0.0, 0});
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::size_t i = 0; i < hypotheses.size(); ++i) {
      const Hypothesis& h = hypotheses[i];
      const Score s = score_hypothesis(points, h.plane, params.inlier_threshold, h.attempt);
      Score& local = thread_best[std::size_t(
#ifdef _OPENMP
          omp_get_thread_num()
#else
          0
#endif
              )];
      if (local.count < 0 || better(s, local)) local = s;
    }
    for (const Score& s : thread_best) {
      if (s.count < 0) continue;
      if (best.count < 0 || better(s, best)) best = s;
    }
  }

  if (best.count < min_inliers) {
    throw Error(ErrorCode::no_consensus, "best consensus below min_inliers");
  }

  const Plane best_plane = [&] {
    for (const Hypothesis& h : hypotheses) {
      if (h.attempt == best.attempt) return h.plane;
    }
    throw Error(ErrorCode::no_consensus, "winning hypothesis lost");
  }();

  std::vector<Point3> inlier_points;
  inlier_points.reserve(std::size_t(best.count));
  for (const Point3& p : points) {
    if (std::abs(plane_signed_distance(best_plane, p)) <= params.inlier_threshold) {
      inlier_points.push_back(p);
    }
  }

  Plane final_plane = best_plane;
  try {
    final_plane = fit_plane_lsq(inlier_points);
  } catch (const Error&) {
    // Near-degenerate inlier sets keep the minimal-sample plane.
  }

  PlaneFit fit;
  fit.plane = final_plane;
  fit.hypothesis_index = best.attempt;
  double sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = plane_signed_distance(final_plane, points[i]);
    if (std::abs(d) <= params.inlier_threshold) {
      fit.inlier_indices.push_back(i);
      sumsq += d * d;
    }
  }
  if (int(fit.inlier_indices.size()) < min_inliers) {
    throw Error(ErrorCode::no_consensus, "re-fit plane lost consensus");
  }
  fit.inlier_rmse = std::sqrt(sumsq / double(fit.inlier_indices.size()));
  return fit;
}

}  // namespace artic
