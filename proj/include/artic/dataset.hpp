#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "artic/io.hpp"
#include "artic/noise.hpp"
#include "artic/scene.hpp"

namespace artic {

/// On-disk scene layout inside its directory:
///   depth.pfm        grayscale PFM, meters, 0 = no return
///   seg.pgm          16-bit PGM, part ids, 0 = background
///   meta.json        camera, poses, parts, per-pair ground truth
///   flow_A_B.pfm     3-channel PFM per connected pair (A parent, B child)
void write_scene(const std::filesystem::path& dir, const RenderedScene& scene);

struct ScenePairMeta {
  GroundTruthPair gt;
  std::string flow_file;  // empty for unconnected pairs
};

struct LoadedScene {
  std::filesystem::path dir;
  CameraIntrinsics camera;
  Pose cam_to_world = Pose::Identity();
  Category category = Category::door;
  double scale = 1.0;
  DepthImage depth;
  SegImage seg;
  std::vector<PartInfo> parts;
  std::vector<ScenePairMeta> pairs;  // all pairs, visible or not
};

LoadedScene load_scene(const std::filesystem::path& dir);

/// Flow image for the pair; pairs without a flow file load as all-zero.
FlowImage load_pair_flow(const LoadedScene& scene, const ScenePairMeta& pair);

/// Pairs of the loaded scene with both parts visible.
std::vector<ScenePairMeta> visible_pairs(const LoadedScene& scene);

struct GenerateConfig {
  std::string category = "mixed";  // one category name, or "mixed"
  int num_scenes = 8;
  std::uint64_t seed = 0;
  SceneConfig scene;
};

/// Writes num_scenes scene directories plus manifest.json listing them.
/// Scene i draws its category (when mixed), object, and configuration from
/// seeds derived from (seed, i), so any subset regenerates identically.
void generate_dataset(const std::filesystem::path& out_dir, const GenerateConfig& config,
                      Exec exec = Exec::parallel);

struct Manifest {
  std::string category;
  int num_scenes = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> scenes;  // directory names relative to the root
};

Manifest load_manifest(const std::filesystem::path& dataset_dir);

NoiseConfig noise_config_from_json(const Json& j);
Json noise_config_to_json(const NoiseConfig& config);

}  // namespace artic
