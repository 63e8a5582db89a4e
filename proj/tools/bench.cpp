// Times each parallel kernel against its serial reference on identical inputs
// and checks that the two produce bit-identical results.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "artic/noise.hpp"
#include "artic/parallel.hpp"
#include "artic/ransac.hpp"
#include "artic/rng.hpp"
#include "artic/scene.hpp"

namespace {

using artic::Exec;

double time_ms(const std::function<void()>& fn, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

int failures = 0;

void report(const std::string& name, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-14s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   %s\n", name.c_str(),
              serial_ms, parallel_ms, serial_ms / parallel_ms, identical ? "identical" : "DIFFER");
  if (!identical) ++failures;
}

void bench_ransac() {
  // 150k points on a tilted plane, 25% uniform outliers.
  artic::Rng rng(artic::derive_seed(7, {1}));
  const artic::Vec3 n = artic::Vec3(0.3, -0.2, 1.0).normalized();
  const artic::Vec3 u = n.cross(artic::Vec3::UnitX()).normalized();
  const artic::Vec3 v = n.cross(u);
  std::vector<artic::Point3> pts;
  pts.reserve(150000);
  for (int i = 0; i < 150000; ++i) {
    if (rng.uniform(0.0, 1.0) < 0.25) {
      pts.push_back({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(0.5, 2.5)});
    } else {
      pts.push_back(artic::Vec3(0, 0, 1.5) + rng.uniform(-1.0, 1.0) * u +
                    rng.uniform(-1.0, 1.0) * v + rng.normal() * 0.002 * n);
    }
  }
  artic::RansacParams params;
  params.iterations = 400;
  params.seed = 11;

  artic::PlaneFit serial_fit, parallel_fit;
  const double ts = time_ms([&] { serial_fit = artic::ransac_plane(pts, params, Exec::serial); }, 3);
  const double tp =
      time_ms([&] { parallel_fit = artic::ransac_plane(pts, params, Exec::parallel); }, 3);
  const bool same = serial_fit.plane.normal == parallel_fit.plane.normal &&
                    serial_fit.plane.offset == parallel_fit.plane.offset &&
                    serial_fit.inlier_indices == parallel_fit.inlier_indices;
  report("ransac_plane", ts, tp, same);
}

void bench_render(artic::RenderedScene& out) {
  const artic::ArticulatedObject object = artic::build_object(artic::Category::door, 3);
  std::vector<double> values;
  for (const artic::Joint& j : object.joints) values.push_back(0.5 * (j.lo + j.hi));
  const artic::SceneConfig config;
  const artic::Pose cam_to_world = artic::sample_camera(artic::object_bounds(object), config, 5);

  artic::RenderedScene serial_scene, parallel_scene;
  const double ts = time_ms(
      [&] { serial_scene = artic::render_scene(object, values, {}, {}, config.camera, cam_to_world,
                                               Exec::serial); },
      3);
  const double tp = time_ms(
      [&] { parallel_scene = artic::render_scene(object, values, {}, {}, config.camera,
                                                 cam_to_world, Exec::parallel); },
      3);
  const bool same =
      serial_scene.depth == parallel_scene.depth && serial_scene.seg == parallel_scene.seg;
  report("render_scene", ts, tp, same);
  out = parallel_scene;
}

void bench_depth_noise(const artic::DepthImage& depth) {
  artic::DepthNoiseParams params;
  params.gaussian_sigma = 0.003;
  params.correlation_scale = 8;
  params.gamma_shape = 40.0;

  artic::DepthImage serial_img, parallel_img;
  const double ts =
      time_ms([&] { serial_img = artic::depth_noise(depth, params, 21, Exec::serial); }, 3);
  const double tp =
      time_ms([&] { parallel_img = artic::depth_noise(depth, params, 21, Exec::parallel); }, 3);
  report("depth_noise", ts, tp, serial_img == parallel_img);
}

void bench_flow_noise(const artic::RenderedScene& scene) {
  artic::FlowImage flow(scene.depth.width, scene.depth.height);
  for (int y = 0; y < flow.height; ++y)
    for (int x = 0; x < flow.width; ++x)
      if (scene.seg(x, y) != 0) flow.set(x, y, {0.01, -0.02, 0.005});
  artic::FlowNoiseParams params;
  params.per_pixel_sigma = 0.005;
  params.bias_sigma = 0.002;

  artic::FlowImage serial_img, parallel_img;
  const double ts =
      time_ms([&] { serial_img = artic::flow_noise(flow, params, 22, Exec::serial); }, 3);
  const double tp =
      time_ms([&] { parallel_img = artic::flow_noise(flow, params, 22, Exec::parallel); }, 3);
  report("flow_noise", ts, tp, serial_img == parallel_img);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", artic::max_threads());
  bench_ransac();
  artic::RenderedScene scene;
  bench_render(scene);
  bench_depth_noise(scene.depth);
  bench_flow_noise(scene);
  return failures == 0 ? 0 : 1;
}
