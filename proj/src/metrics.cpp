#include <algorithm>
#include <cmath>

#include "artic/geometry.hpp"
#include "artic/metrics.hpp"

namespace artic {

AccuracyReport classification_report(std::span<const PairResult> results) {
  struct Counts {
    int pairs = 0, connected = 0, tp = 0;
    int ca_hit = 0, pc_hit = 0, at_hit = 0;
  };
  if (results.empty()) throw Error(ErrorCode::invalid_input, "no pair results to score");
  std::map<Category, Counts> tally;
  for (const auto& r : results) {
    Counts& c = tally[r.category];
    ++c.pairs;
    const bool gt_conn = r.gt != PairClass::unconnected;
    if (gt_conn) ++c.connected;
    if (r.pred_connected == gt_conn) ++c.pc_hit;
    // An errored estimate predicts nothing, so it can only be right when the
    // connectedness gate already said unconnected.
    PairClass pred = PairClass::unconnected;
    bool has_pred = true;
    if (r.pred_connected) {
      if (r.pred_type.has_value())
        pred = *r.pred_type;
      else
        has_pred = false;
    }
    if (has_pred && pred == r.gt) ++c.ca_hit;
    if (gt_conn && r.pred_connected) {
      ++c.tp;
      if (has_pred && pred == r.gt) ++c.at_hit;
    }
  }

  AccuracyReport report;
  double ca_sum = 0, pc_sum = 0, at_sum = 0;
  int pairs_sum = 0, conn_sum = 0, tp_sum = 0;
  for (const auto& [cat, c] : tally) {
    CategoryScores s;
    s.pairs = c.pairs;
    s.connected = c.connected;
    s.tp_connected = c.tp;
    s.ca = c.pairs > 0 ? 100.0 * c.ca_hit / c.pairs : 100.0;
    s.pc = c.pairs > 0 ? 100.0 * c.pc_hit / c.pairs : 100.0;
    s.at = c.tp > 0 ? 100.0 * c.at_hit / c.tp : 100.0;
    report.per_category[cat] = s;
    ca_sum += s.ca;
    pc_sum += s.pc;
    at_sum += s.at;
    pairs_sum += s.pairs;
    conn_sum += s.connected;
    tp_sum += s.tp_connected;
  }
  const double n = static_cast<double>(report.per_category.size());
  report.average.pairs = pairs_sum;
  report.average.connected = conn_sum;
  report.average.tp_connected = tp_sum;
  if (n > 0) {
    report.average.ca = ca_sum / n;
    report.average.pc = pc_sum / n;
    report.average.at = at_sum / n;
  }
  return report;
}

double axis_distance_error(const Line3& gt, double span, const Line3& pred, int k) {
  if (!(span > 0.0)) throw Error(ErrorCode::invalid_input, "axis span must be positive");
  if (k < 1) throw Error(ErrorCode::invalid_input, "need at least one sample");
  const Vec3 dir = gt.direction.normalized();
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    const double t = span * ((i + 0.5) / k - 0.5);
    sum += point_to_line_distance(gt.point + t * dir, pred);
  }
  return sum / k;
}

double axis_angle_error(const Vec3& gt_dir, const Vec3& pred_dir) {
  const double na = gt_dir.norm(), nb = pred_dir.norm();
  if (!(na > 0.0) || !(nb > 0.0))
    throw Error(ErrorCode::invalid_input, "axis direction must be non-zero");
  const double d = std::clamp(std::abs(gt_dir.dot(pred_dir)) / (na * nb), 0.0, 1.0);
  return std::acos(d);
}

std::vector<double> threshold_curve(std::span<const double> errors,
                                    std::span<const double> thresholds) {
  for (size_t i = 1; i < thresholds.size(); ++i)
    if (!(thresholds[i] > thresholds[i - 1]))
      throw Error(ErrorCode::invalid_input, "thresholds must be strictly ascending");
  std::vector<double> curve(thresholds.size(), 0.0);
  if (errors.empty()) return curve;
  for (size_t i = 0; i < thresholds.size(); ++i) {
    size_t count = 0;
    for (double e : errors)
      if (e <= thresholds[i]) ++count;
    curve[i] = static_cast<double>(count) / static_cast<double>(errors.size());
  }
  return curve;
}

}  // namespace artic
