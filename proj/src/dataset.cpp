#include <cstdio>
#include <filesystem>

#include "artic/dataset.hpp"
#include "artic/flow.hpp"
#include "artic/rng.hpp"

namespace artic {

namespace fs = std::filesystem;

namespace {

Json vec3_to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::parse_error, "expected 3-vector");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

Json pose_to_json(const Pose& p) {
  Json out = Json::array();
  const Eigen::Matrix4d m = p.matrix();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out.push_back(m(r, c));
  return out;
}

Pose pose_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 16) throw Error(ErrorCode::parse_error, "expected 4x4 pose");
  Eigen::Matrix4d m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = j[4 * r + c].get<double>();
  Pose p = Pose::Identity();
  p.matrix() = m;
  return p;
}

std::string flow_name(int a, int b) {
  return "flow_" + std::to_string(a) + "_" + std::to_string(b) + ".pfm";
}

}  // namespace

void write_scene(const fs::path& dir, const RenderedScene& scene) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot create " + dir.string());

  write_pfm(dir / "depth.pfm", scene.depth);
  write_pgm16(dir / "seg.pgm", scene.seg);

  Json meta;
  meta["camera"] = {{"fx", scene.camera.fx}, {"fy", scene.camera.fy}, {"cx", scene.camera.cx},
                    {"cy", scene.camera.cy}, {"width", scene.camera.width},
                    {"height", scene.camera.height}};
  meta["cam_to_world"] = pose_to_json(scene.cam_to_world);
  meta["category"] = category_name(scene.category);
  meta["scale"] = scene.scale;
  meta["joint_values"] = scene.joint_values;
  meta["parts"] = Json::array();
  for (const auto& p : scene.parts)
    meta["parts"].push_back({{"id", p.id},
                             {"name", p.name},
                             {"distractor", p.distractor},
                             {"visible_pixels", p.visible_pixels},
                             {"primary_pixels", p.primary_pixels}});
  meta["pairs"] = Json::array();
  for (const auto& gp : scene.gt_pairs) {
    Json jp = {{"a", gp.a}, {"b", gp.b}, {"class", pair_class_name(gp.cls)}};
    if (gp.cls != PairClass::unconnected) {
      jp["lo"] = gp.lo;
      jp["hi"] = gp.hi;
      jp["value"] = gp.value;
      jp["span"] = gp.span;
      jp["flow"] = flow_name(gp.a, gp.b);
      if (gp.cls == PairClass::revolute) {
        jp["axis"] = {{"point", vec3_to_json(gp.axis.point)},
                      {"dir", vec3_to_json(gp.axis.direction)}};
      } else if (gp.cls == PairClass::prismatic) {
        jp["direction"] = vec3_to_json(gp.direction);
        jp["max_travel"] = gp.max_travel;
      }
    }
    meta["pairs"].push_back(jp);
  }
  save_json(dir / "meta.json", meta);

  for (const auto& gp : scene.gt_pairs) {
    if (gp.cls == PairClass::unconnected) continue;
    const PairFlow pf = gt_flow(scene, gp.a, gp.b);
    write_pfm(dir / flow_name(gp.a, gp.b), pf.flow);
  }
}

LoadedScene load_scene(const fs::path& dir) {
  LoadedScene scene;
  scene.dir = dir;
  scene.depth = read_pfm_gray(dir / "depth.pfm");
  scene.seg = read_pgm16(dir / "seg.pgm");
  const Json meta = load_json(dir / "meta.json");
  try {
    const Json& cam = meta.at("camera");
    scene.camera.fx = cam.at("fx").get<double>();
    scene.camera.fy = cam.at("fy").get<double>();
    scene.camera.cx = cam.at("cx").get<double>();
    scene.camera.cy = cam.at("cy").get<double>();
    scene.camera.width = cam.at("width").get<int>();
    scene.camera.height = cam.at("height").get<int>();
    scene.cam_to_world = pose_from_json(meta.at("cam_to_world"));
    scene.category = category_from_name(meta.at("category").get<std::string>());
    scene.scale = meta.at("scale").get<double>();
    for (const auto& jp : meta.at("parts")) {
      PartInfo p;
      p.id = jp.at("id").get<int>();
      p.name = jp.at("name").get<std::string>();
      p.distractor = jp.at("distractor").get<bool>();
      p.visible_pixels = jp.at("visible_pixels").get<int>();
      p.primary_pixels = jp.value("primary_pixels", p.visible_pixels);
      scene.parts.push_back(p);
    }
    for (const auto& jp : meta.at("pairs")) {
      ScenePairMeta pm;
      pm.gt.a = jp.at("a").get<int>();
      pm.gt.b = jp.at("b").get<int>();
      pm.gt.cls = pair_class_from_name(jp.at("class").get<std::string>());
      if (pm.gt.cls != PairClass::unconnected) {
        pm.gt.lo = jp.at("lo").get<double>();
        pm.gt.hi = jp.at("hi").get<double>();
        pm.gt.value = jp.at("value").get<double>();
        pm.gt.span = jp.at("span").get<double>();
        pm.flow_file = jp.at("flow").get<std::string>();
        if (pm.gt.cls == PairClass::revolute) {
          pm.gt.axis.point = vec3_from_json(jp.at("axis").at("point"));
          pm.gt.axis.direction = vec3_from_json(jp.at("axis").at("dir"));
        } else if (pm.gt.cls == PairClass::prismatic) {
          pm.gt.direction = vec3_from_json(jp.at("direction"));
          pm.gt.max_travel = jp.at("max_travel").get<double>();
        }
      }
      scene.pairs.push_back(pm);
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, dir.string() + "/meta.json: " + e.what());
  }
  if (scene.depth.width != scene.seg.width || scene.depth.height != scene.seg.height ||
      scene.depth.width != scene.camera.width || scene.depth.height != scene.camera.height)
    throw Error(ErrorCode::shape_mismatch, dir.string() + ": image sizes disagree");
  return scene;
}

FlowImage load_pair_flow(const LoadedScene& scene, const ScenePairMeta& pair) {
  if (pair.flow_file.empty()) return FlowImage(scene.depth.width, scene.depth.height);
  FlowImage flow = read_pfm_flow(scene.dir / pair.flow_file);
  if (flow.width != scene.depth.width || flow.height != scene.depth.height)
    throw Error(ErrorCode::shape_mismatch, pair.flow_file + ": flow size disagrees");
  return flow;
}

std::vector<ScenePairMeta> visible_pairs(const LoadedScene& scene) {
  std::vector<ScenePairMeta> out;
  auto vis = [&](int id) {
    for (const auto& p : scene.parts)
      if (p.id == id) return p.visible_pixels > 0;
    return false;
  };
  for (const auto& pm : scene.pairs)
    if (vis(pm.gt.a) && vis(pm.gt.b)) out.push_back(pm);
  return out;
}

void generate_dataset(const fs::path& out_dir, const GenerateConfig& config, Exec exec) {
  if (config.num_scenes < 1)
    throw Error(ErrorCode::invalid_input, "need at least one scene");
  const bool mixed = config.category == "mixed";
  Category fixed_cat = Category::door;
  if (!mixed) fixed_cat = category_from_name(config.category);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot create " + out_dir.string());

  Json scenes = Json::array();
  for (int i = 0; i < config.num_scenes; ++i) {
    const std::uint64_t si = static_cast<std::uint64_t>(i);
    Category cat = fixed_cat;
    if (mixed)
      cat = static_cast<Category>(Rng(derive_seed(config.seed, {21, si})).below(kNumCategories));
    const ArticulatedObject object = build_object(cat, derive_seed(config.seed, {22, si}));
    const std::uint64_t scene_seed = derive_seed(config.seed, {23, si});
    const RenderedScene scene = generate_scene(object, config.scene, scene_seed, exec);
    char name[32];
    std::snprintf(name, sizeof name, "scene-%04d", i);
    write_scene(out_dir / name, scene);
    Json js = {{"name", name},
               {"seed", scene_seed},
               {"category", category_name(scene.category)},
               {"pairs", Json::array()}};
    for (const auto& gp : pairs(scene))
      js["pairs"].push_back({{"a", gp.a}, {"b", gp.b}, {"class", pair_class_name(gp.cls)}});
    scenes.push_back(std::move(js));
  }

  Json j;
  j["category"] = config.category;
  j["num_scenes"] = config.num_scenes;
  j["seed"] = config.seed;
  j["scenes"] = std::move(scenes);
  save_json(out_dir / "manifest.json", j);
}

Manifest load_manifest(const fs::path& dataset_dir) {
  const Json j = load_json(dataset_dir / "manifest.json");
  Manifest m;
  try {
    m.category = j.at("category").get<std::string>();
    m.num_scenes = j.at("num_scenes").get<int>();
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& s : j.at("scenes")) m.scenes.push_back(s.at("name").get<std::string>());
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("manifest.json: ") + e.what());
  }
  return m;
}

NoiseConfig noise_config_from_json(const Json& j) {
  NoiseConfig c;
  try {
    c.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("depth")) {
      const Json& d = j.at("depth");
      c.depth.gaussian_sigma = d.value("gaussian_sigma", 0.0);
      c.depth.correlation_scale = d.value("correlation_scale", 0.0);
      c.depth.gamma_shape = d.value("gamma_shape", 0.0);
    }
    if (j.contains("mask")) {
      const Json& m = j.at("mask");
      c.mask.salt_pepper_rate = m.value("salt_pepper_rate", 0.0);
      c.mask.closing_radius = m.value("closing_radius", 0);
    }
    if (j.contains("flow")) {
      const Json& f = j.at("flow");
      c.flow.per_pixel_sigma = f.value("per_pixel_sigma", 0.0);
      c.flow.bias_sigma = f.value("bias_sigma", 0.0);
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("noise config: ") + e.what());
  }
  return c;
}

Json noise_config_to_json(const NoiseConfig& config) {
  return Json{{"seed", config.seed},
              {"depth",
               {{"gaussian_sigma", config.depth.gaussian_sigma},
                {"correlation_scale", config.depth.correlation_scale},
                {"gamma_shape", config.depth.gamma_shape}}},
              {"mask",
               {{"salt_pepper_rate", config.mask.salt_pepper_rate},
                {"closing_radius", config.mask.closing_radius}}},
              {"flow",
               {{"per_pixel_sigma", config.flow.per_pixel_sigma},
                {"bias_sigma", config.flow.bias_sigma}}}};
}

}  // namespace artic
