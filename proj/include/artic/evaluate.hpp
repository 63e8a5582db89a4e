#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "artic/dataset.hpp"
#include "artic/inference.hpp"
#include "artic/metrics.hpp"
#include "artic/noise.hpp"

namespace artic {

struct EvaluateOptions {
  /// Oracle mode feeds ground-truth flow and connectivity (prob 1/0) to the
  /// estimator; otherwise per-scene predictions.json files are read from
  /// predictions_dir.
  bool oracle = true;
  std::filesystem::path predictions_dir;
  std::optional<NoiseConfig> noise;
  InferenceParams params;
  Exec exec = Exec::parallel;
};

struct PairEvaluation {
  std::string scene;
  Category category = Category::door;
  int a = 0;
  int b = 0;
  PairClass gt = PairClass::unconnected;
  bool pred_connected = false;
  bool has_estimate = false;
  PairClass pred = PairClass::unconnected;  // effective four-way prediction
  std::string error;                        // error code name when inference failed
  bool low_confidence = false;
  double axis_angle = -1.0;     // rad; revolute true positives, else -1
  double axis_distance = -1.0;  // m; revolute true positives, else -1
  double dir_angle = -1.0;      // rad; prismatic true positives, else -1
};

struct EvaluationResult {
  std::vector<PairEvaluation> pairs;
  AccuracyReport report;
  std::vector<double> rev_angle_errors;
  std::vector<double> rev_dist_errors;
  std::vector<double> prism_angle_errors;
};

EvaluationResult evaluate_dataset(const std::filesystem::path& dataset_dir,
                                  const EvaluateOptions& options);

Json evaluation_to_json(const EvaluationResult& result);

/// Fixed-width accuracy table: one column per category plus the macro
/// average; rows AT, PC, CA.
std::string report_table(const AccuracyReport& report);

}  // namespace artic
