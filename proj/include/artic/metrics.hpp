#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "artic/scene.hpp"

namespace artic {

/// Outcome of one evaluated pair, carrying whatever the pipeline produced.
struct PairResult {
  Category category = Category::door;
  PairClass gt = PairClass::unconnected;
  bool pred_connected = false;
  std::optional<PairClass> pred_type;  // empty when inference errored
  std::string error;                   // error code name when inference failed
};

struct CategoryScores {
  int pairs = 0;           // evaluated pairs
  int connected = 0;       // ground-truth connected pairs
  int tp_connected = 0;    // connected pairs also predicted connected
  double ca = 0.0;         // four-way classification accuracy, percent
  double pc = 0.0;         // connectedness accuracy, percent
  double at = 0.0;         // joint-type accuracy on tp_connected, percent
};

struct AccuracyReport {
  std::map<Category, CategoryScores> per_category;
  CategoryScores average;  // macro average over present categories
};

/// CA: four-way class (revolute/prismatic/fixed/unconnected) correctness,
/// where an errored estimate counts as wrong. PC: predicted connectedness vs
/// ground truth. AT: joint-type correctness restricted to true-positive
/// connected pairs (vacuously 100 when none exist).
AccuracyReport classification_report(std::span<const PairResult> results);

/// Mean distance from k points placed midpoint-uniformly on the ground-truth
/// axis segment (centered on gt.point, length span) to the predicted line.
double axis_distance_error(const Line3& gt, double span, const Line3& pred, int k = 100);

/// Unsigned angle between the two directions, orientation-free: acos(|dot|).
double axis_angle_error(const Vec3& gt_dir, const Vec3& pred_dir);

/// Fraction of errors <= t for each threshold; thresholds must be strictly
/// ascending. An empty error list yields all zeros.
std::vector<double> threshold_curve(std::span<const double> errors,
                                    std::span<const double> thresholds);

}  // namespace artic
