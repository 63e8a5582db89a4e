#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "artic/cli.hpp"
#include "artic/dataset.hpp"
#include "artic/evaluate.hpp"
#include "artic/inference.hpp"
#include "artic/io.hpp"
#include "artic/metrics.hpp"
#include "artic/parallel.hpp"

namespace artic::cli {

namespace {

struct CommonOpts {
  int threads = 0;
  bool serial = false;
  Exec exec() const { return serial ? Exec::serial : Exec::parallel; }
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--threads", c.threads, "Worker thread count (0 = library default)");
  cmd->add_flag("--serial", c.serial, "Run the serial reference kernels");
}

struct InferOpts {
  InferenceParams params;
  CameraIntrinsics cam;
};

void add_inference(CLI::App* cmd, InferOpts& o) {
  cmd->add_option("--eps0", o.params.eps0, "Fixed-pair gate on mean flow norm, meters");
  cmd->add_option("--eps1", o.params.eps1, "Prismatic gate on 1 - normal dot");
  cmd->add_option("--ransac-iters", o.params.ransac.iterations, "RANSAC hypothesis count");
  cmd->add_option("--ransac-thresh", o.params.ransac.inlier_threshold,
                  "RANSAC inlier distance, meters");
  cmd->add_option("--ransac-seed", o.params.ransac.seed, "RANSAC seed");
  cmd->add_option("--min-inliers", o.params.ransac.min_inliers,
                  "Consensus floor (0 = 10% of the cloud)");
}

void add_camera(CLI::App* cmd, CameraIntrinsics& cam) {
  cmd->add_option("--fx", cam.fx, "Focal length x, pixels");
  cmd->add_option("--fy", cam.fy, "Focal length y, pixels");
  cmd->add_option("--cx", cam.cx, "Principal point x, pixels");
  cmd->add_option("--cy", cam.cy, "Principal point y, pixels");
}

void apply_common(const CommonOpts& c) {
  if (c.threads > 0) set_threads(c.threads);
}

Json estimate_to_json(const ArticulationEstimate& est) {
  Json j;
  j["kind"] = pair_class_name(est.kind);
  if (est.axis)
    j["axis"] = {{"point", {est.axis->point.x(), est.axis->point.y(), est.axis->point.z()}},
                 {"dir", {est.axis->direction.x(), est.axis->direction.y(),
                          est.axis->direction.z()}}};
  if (est.direction)
    j["direction"] = {est.direction->x(), est.direction->y(), est.direction->z()};
  j["diagnostics"] = {{"mean_flow_norm", est.diag.mean_flow_norm},
                      {"mask_pixels", est.diag.mask_pixels},
                      {"cloud_points", est.diag.cloud_points},
                      {"pre_inlier_fraction", est.diag.pre_inlier_fraction},
                      {"post_inlier_fraction", est.diag.post_inlier_fraction},
                      {"pre_rmse", est.diag.pre_rmse},
                      {"post_rmse", est.diag.post_rmse},
                      {"normals_dot", est.diag.normals_dot},
                      {"low_confidence", est.diag.low_confidence}};
  return j;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nan("");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
}

void write_curves_csv(const std::filesystem::path& path, const EvaluationResult& res) {
  std::ostringstream csv;
  csv << "metric,threshold,fraction\n";
  const std::vector<double> angle_deg = {0.5, 1, 2, 3, 5, 7.5, 10, 15, 20, 30};
  std::vector<double> angle_rad;
  for (double a : angle_deg) angle_rad.push_back(a * 3.14159265358979323846 / 180.0);
  const std::vector<double> dist_m = {0.005, 0.01, 0.02, 0.03, 0.05, 0.075, 0.1, 0.15, 0.2, 0.3};
  const auto ang = threshold_curve(res.rev_angle_errors, angle_rad);
  for (size_t i = 0; i < angle_deg.size(); ++i)
    csv << "revolute_angle_deg," << angle_deg[i] << "," << ang[i] << "\n";
  const auto dist = threshold_curve(res.rev_dist_errors, dist_m);
  for (size_t i = 0; i < dist_m.size(); ++i)
    csv << "revolute_distance_m," << dist_m[i] << "," << dist[i] << "\n";
  const auto pang = threshold_curve(res.prism_angle_errors, angle_rad);
  for (size_t i = 0; i < angle_deg.size(); ++i)
    csv << "prismatic_angle_deg," << angle_deg[i] << "," << pang[i] << "\n";
  write_text(path, csv.str());
}

}  // namespace

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse_error:
    case ErrorCode::invalid_input:
    case ErrorCode::io_error:
    case ErrorCode::joint_limit:
      return 2;
    case ErrorCode::missing_entity:
      return 3;
    case ErrorCode::shape_mismatch:
    case ErrorCode::incomplete_input:
      return 4;
    default:
      return 5;
  }
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Articulation inference from depth and residual 3D flow"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Render a synthetic scene dataset");
  std::string gen_out;
  GenerateConfig gen_cfg;
  CommonOpts gen_common;
  gen->add_option("--out", gen_out, "Output dataset directory")->required();
  gen->add_option("--num-scenes", gen_cfg.num_scenes, "Scene count");
  gen->add_option("--seed", gen_cfg.seed, "Dataset seed");
  gen->add_option("--category", gen_cfg.category, "Category name or 'mixed'");
  gen->add_option("--distractors", gen_cfg.scene.distractors, "Clutter parts per scene");
  gen->add_option("--min-part-pixels", gen_cfg.scene.min_part_pixels,
                  "Per-part visibility floor");
  gen->add_option("--max-attempts", gen_cfg.scene.max_camera_attempts,
                  "Camera retry budget per scene");
  gen->add_option("--radius-lo", gen_cfg.scene.radius_lo, "Camera distance lower bound, meters");
  gen->add_option("--radius-hi", gen_cfg.scene.radius_hi, "Camera distance upper bound, meters");
  add_common(gen, gen_common);

  // infer
  auto* inf = app.add_subcommand("infer", "Classify one part pair from files");
  std::string inf_depth, inf_seg, inf_flow, inf_out = "-";
  int inf_a = 0, inf_b = 0;
  double inf_prob = 1.0;
  InferOpts inf_opts;
  CommonOpts inf_common;
  inf->add_option("--depth", inf_depth, "Depth PFM")->required();
  inf->add_option("--seg", inf_seg, "Segmentation PGM")->required();
  inf->add_option("--flow", inf_flow, "Flow PFM")->required();
  inf->add_option("--part-a", inf_a, "Anchor part id")->required();
  inf->add_option("--part-b", inf_b, "Candidate part id")->required();
  inf->add_option("--prob", inf_prob, "Connectivity probability");
  inf->add_option("--out", inf_out, "Output JSON path ('-' = stdout)");
  add_inference(inf, inf_opts);
  add_camera(inf, inf_opts.cam);
  add_common(inf, inf_common);

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Score articulation inference over a dataset");
  std::string ev_dataset, ev_predictions, ev_noise, ev_out_dir;
  bool ev_oracle = false;
  InferOpts ev_opts;
  CommonOpts ev_common;
  ev->add_option("--dataset", ev_dataset, "Dataset directory")->required();
  ev->add_flag("--oracle", ev_oracle, "Feed ground-truth flow and connectivity");
  ev->add_option("--predictions", ev_predictions, "Per-scene predictions directory");
  ev->add_option("--noise-config", ev_noise, "Corruption config JSON");
  ev->add_option("--out-dir", ev_out_dir, "Write report.json, table.txt, curves.csv here");
  add_inference(ev, ev_opts);
  add_common(ev, ev_common);

  // sweep-noise
  auto* sw = app.add_subcommand("sweep-noise", "Evaluate across one corruption parameter");
  std::string sw_dataset, sw_param, sw_values, sw_noise, sw_out = "-";
  InferOpts sw_opts;
  CommonOpts sw_common;
  sw->add_option("--dataset", sw_dataset, "Dataset directory")->required();
  sw->add_option("--param", sw_param,
                 "depth_sigma | gamma_shape | mask_rate | flow_sigma | bias_sigma")
      ->required();
  sw->add_option("--values", sw_values, "Comma-separated parameter values")->required();
  sw->add_option("--noise-config", sw_noise, "Base corruption config JSON");
  sw->add_option("--out", sw_out, "CSV output path ('-' = stdout)");
  add_inference(sw, sw_opts);
  add_common(sw, sw_common);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::Success&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (gen->parsed()) {
      apply_common(gen_common);
      generate_dataset(gen_out, gen_cfg, gen_common.exec());
      std::cout << "wrote " << gen_cfg.num_scenes << " scenes to " << gen_out << "\n";
      return 0;
    }

    if (inf->parsed()) {
      apply_common(inf_common);
      const DepthImage depth = read_pfm_gray(inf_depth);
      const SegImage seg = read_pgm16(inf_seg);
      const FlowImage flow = read_pfm_flow(inf_flow);
      const ArticulationEstimate est = infer_pair(depth, seg, flow, inf_a, inf_b, inf_prob,
                                                  inf_opts.cam, inf_opts.params,
                                                  inf_common.exec());
      const std::string text = estimate_to_json(est).dump(2) + "\n";
      if (inf_out == "-")
        std::cout << text;
      else
        write_text(inf_out, text);
      return 0;
    }

    if (ev->parsed()) {
      apply_common(ev_common);
      EvaluateOptions options;
      options.params = ev_opts.params;
      options.exec = ev_common.exec();
      if (!ev_predictions.empty()) {
        if (ev_oracle)
          throw Error(ErrorCode::invalid_input, "--oracle and --predictions are exclusive");
        options.oracle = false;
        options.predictions_dir = ev_predictions;
      } else {
        options.oracle = true;
      }
      if (!ev_noise.empty()) options.noise = noise_config_from_json(load_json(ev_noise));
      const EvaluationResult res = evaluate_dataset(ev_dataset, options);
      std::cout << report_table(res.report);
      if (!ev_out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(ev_out_dir, ec);
        if (ec) throw Error(ErrorCode::io_error, "cannot create " + ev_out_dir);
        save_json(std::filesystem::path(ev_out_dir) / "report.json", evaluation_to_json(res));
        write_text(std::filesystem::path(ev_out_dir) / "table.txt", report_table(res.report));
        write_curves_csv(std::filesystem::path(ev_out_dir) / "curves.csv", res);
      }
      return 0;
    }

    if (sw->parsed()) {
      apply_common(sw_common);
      NoiseConfig base;
      if (!sw_noise.empty()) base = noise_config_from_json(load_json(sw_noise));
      std::vector<double> values;
      std::stringstream ss(sw_values);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        try {
          values.push_back(std::stod(tok));
        } catch (const std::exception&) {
          throw Error(ErrorCode::invalid_input, "bad sweep value '" + tok + "'");
        }
      }
      if (values.empty()) throw Error(ErrorCode::invalid_input, "no sweep values given");

      std::ostringstream csv;
      csv << "param,value,at,pc,ca,rev_angle_mean_rad,rev_dist_mean_m,prism_angle_mean_rad,"
             "pairs\n";
      for (double v : values) {
        NoiseConfig cfg = base;
        if (sw_param == "depth_sigma")
          cfg.depth.gaussian_sigma = v;
        else if (sw_param == "gamma_shape")
          cfg.depth.gamma_shape = v;
        else if (sw_param == "mask_rate")
          cfg.mask.salt_pepper_rate = v;
        else if (sw_param == "flow_sigma")
          cfg.flow.per_pixel_sigma = v;
        else if (sw_param == "bias_sigma")
          cfg.flow.bias_sigma = v;
        else
          throw Error(ErrorCode::invalid_input, "unknown sweep parameter '" + sw_param + "'");
        EvaluateOptions options;
        options.oracle = true;
        options.params = sw_opts.params;
        options.exec = sw_common.exec();
        options.noise = cfg;
        const EvaluationResult res = evaluate_dataset(sw_dataset, options);
        csv << sw_param << "," << v << "," << res.report.average.at << ","
            << res.report.average.pc << "," << res.report.average.ca << ","
            << mean_of(res.rev_angle_errors) << "," << mean_of(res.rev_dist_errors) << ","
            << mean_of(res.prism_angle_errors) << "," << res.report.average.pairs << "\n";
      }
      if (sw_out == "-")
        std::cout << csv.str();
      else
        write_text(sw_out, csv.str());
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace artic::cli
