#include <cstdio>
#include <map>

#include "artic/evaluate.hpp"
#include "artic/metrics.hpp"
#include "artic/rng.hpp"

namespace artic {

namespace fs = std::filesystem;

namespace {

struct Prediction {
  double prob = 0.0;
  std::string flow_file;
};

std::map<std::pair<int, int>, Prediction> load_predictions(const fs::path& file) {
  const Json j = load_json(file);
  std::map<std::pair<int, int>, Prediction> out;
  try {
    for (const auto& jp : j.at("pairs")) {
      const int a = jp.at("a").get<int>();
      const int b = jp.at("b").get<int>();
      Prediction p;
      p.prob = jp.at("connected_prob").get<double>();
      if (jp.contains("flow")) p.flow_file = jp.at("flow").get<std::string>();
      out[std::minmax(a, b)] = p;
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, file.string() + ": " + e.what());
  }
  return out;
}

}  // namespace

EvaluationResult evaluate_dataset(const fs::path& dataset_dir, const EvaluateOptions& options) {
  const Manifest manifest = load_manifest(dataset_dir);
  EvaluationResult result;
  std::vector<PairResult> outcomes;

  for (size_t si = 0; si < manifest.scenes.size(); ++si) {
    const std::string& name = manifest.scenes[si];
    const LoadedScene scene = load_scene(dataset_dir / name);
    DepthImage depth = scene.depth;
    if (options.noise)
      depth = depth_noise(depth, options.noise->depth,
                          derive_seed(options.noise->seed, {31, si}), options.exec);

    std::map<std::pair<int, int>, Prediction> preds;
    if (!options.oracle)
      preds = load_predictions(options.predictions_dir / name / "predictions.json");

    for (const auto& pm : visible_pairs(scene)) {
      PairEvaluation pe;
      pe.scene = name;
      pe.category = scene.category;
      pe.a = pm.gt.a;
      pe.b = pm.gt.b;
      pe.gt = pm.gt.cls;

      double prob = 0.0;
      FlowImage flow(scene.depth.width, scene.depth.height);
      if (options.oracle) {
        prob = pm.gt.cls == PairClass::unconnected ? 0.0 : 1.0;
        if (!pm.flow_file.empty()) flow = load_pair_flow(scene, pm);
      } else {
        auto it = preds.find(std::minmax(pe.a, pe.b));
        if (it == preds.end())
          throw Error(ErrorCode::incomplete_input,
                      name + ": no prediction for pair " + std::to_string(pe.a) + "-" +
                          std::to_string(pe.b));
        prob = it->second.prob;
        if (!it->second.flow_file.empty()) {
          flow = read_pfm_flow(options.predictions_dir / name / it->second.flow_file);
          if (flow.width != scene.depth.width || flow.height != scene.depth.height)
            throw Error(ErrorCode::shape_mismatch, name + ": predicted flow size disagrees");
        }
      }
      if (options.noise)
        flow = flow_noise(flow, options.noise->flow,
                          derive_seed(options.noise->seed,
                                      {32, si, static_cast<std::uint64_t>(pe.a),
                                       static_cast<std::uint64_t>(pe.b)}),
                          options.exec);

      if (prob < 0.5) {
        pe.pred_connected = false;
        pe.pred = PairClass::unconnected;
      } else {
        pe.pred_connected = true;
        Image<std::uint8_t> mask(scene.seg.width, scene.seg.height);
        for (int y = 0; y < scene.seg.height; ++y)
          for (int x = 0; x < scene.seg.width; ++x)
            if (scene.seg(x, y) == pe.b) mask(x, y) = 1;
        if (options.noise)
          mask = mask_noise(mask, options.noise->mask,
                            derive_seed(options.noise->seed,
                                        {33, si, static_cast<std::uint64_t>(pe.b)}),
                            options.exec);
        try {
          const ArticulationEstimate est =
              infer_articulation(depth, mask, flow, scene.camera, options.params, options.exec);
          pe.has_estimate = true;
          pe.pred = est.kind;
          pe.low_confidence = est.diag.low_confidence;
          if (pe.gt == PairClass::revolute && est.kind == PairClass::revolute && est.axis) {
            pe.axis_angle = axis_angle_error(pm.gt.axis.direction, est.axis->direction);
            pe.axis_distance = axis_distance_error(pm.gt.axis, pm.gt.span, *est.axis);
            result.rev_angle_errors.push_back(pe.axis_angle);
            result.rev_dist_errors.push_back(pe.axis_distance);
          }
          if (pe.gt == PairClass::prismatic && est.kind == PairClass::prismatic && est.direction) {
            pe.dir_angle = axis_angle_error(pm.gt.direction, *est.direction);
            result.prism_angle_errors.push_back(pe.dir_angle);
          }
        } catch (const Error& e) {
          pe.error = error_code_name(e.code());
        }
      }

      PairResult pr;
      pr.category = pe.category;
      pr.gt = pe.gt;
      pr.pred_connected = pe.pred_connected;
      if (!pe.pred_connected || pe.has_estimate) pr.pred_type = pe.pred;
      pr.error = pe.error;
      outcomes.push_back(pr);
      result.pairs.push_back(std::move(pe));
    }
  }
  result.report = classification_report(outcomes);
  return result;
}

Json evaluation_to_json(const EvaluationResult& result) {
  Json j;
  auto scores = [](const CategoryScores& s) {
    return Json{{"pairs", s.pairs},       {"connected", s.connected},
                {"tp_connected", s.tp_connected}, {"ca", s.ca},
                {"pc", s.pc},             {"at", s.at}};
  };
  j["report"]["average"] = scores(result.report.average);
  for (const auto& [cat, s] : result.report.per_category)
    j["report"]["per_category"][category_name(cat)] = scores(s);
  j["axis_errors"] = {{"revolute_angle_rad", result.rev_angle_errors},
                      {"revolute_distance_m", result.rev_dist_errors},
                      {"prismatic_angle_rad", result.prism_angle_errors}};
  j["pairs"] = Json::array();
  for (const auto& pe : result.pairs) {
    Json jp = {{"scene", pe.scene},
               {"category", category_name(pe.category)},
               {"a", pe.a},
               {"b", pe.b},
               {"gt", pair_class_name(pe.gt)},
               {"pred_connected", pe.pred_connected},
               {"low_confidence", pe.low_confidence}};
    if (pe.pred_connected && !pe.has_estimate)
      jp["error"] = pe.error;
    else
      jp["pred"] = pair_class_name(pe.pred);
    if (pe.axis_angle >= 0.0) {
      jp["axis_angle_rad"] = pe.axis_angle;
      jp["axis_distance_m"] = pe.axis_distance;
    }
    if (pe.dir_angle >= 0.0) jp["direction_angle_rad"] = pe.dir_angle;
    j["pairs"].push_back(jp);
  }
  return j;
}

std::string report_table(const AccuracyReport& report) {
  const Category order[] = {Category::door,       Category::window, Category::faucet,
                            Category::dishwasher, Category::fridge, Category::cabinet};
  const char* headers[] = {"Door", "Wind.", "Fauc.", "Dish.", "Frid.", "Cab."};
  std::string out = "      ";
  char buf[32];
  for (const char* hd : headers) {
    std::snprintf(buf, sizeof buf, "%7s", hd);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "%7s\n", "Avg");
  out += buf;
  auto row = [&](const char* label, auto pick) {
    std::snprintf(buf, sizeof buf, "%-6s", label);
    out += buf;
    for (Category c : order) {
      auto it = report.per_category.find(c);
      if (it == report.per_category.end())
        std::snprintf(buf, sizeof buf, "%7s", "-");
      else
        std::snprintf(buf, sizeof buf, "%7.1f", pick(it->second));
      out += buf;
    }
    std::snprintf(buf, sizeof buf, "%7.1f\n", pick(report.average));
    out += buf;
  };
  row("AT", [](const CategoryScores& s) { return s.at; });
  row("PC", [](const CategoryScores& s) { return s.pc; });
  row("CA", [](const CategoryScores& s) { return s.ca; });
  return out;
}

}  // namespace artic
