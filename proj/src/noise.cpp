#include <cmath>
#include <vector>

#include "artic/noise.hpp"
#include "artic/rng.hpp"
#include "artic/types.hpp"

namespace artic {

namespace {

void validate(const DepthNoiseParams& p) {
  if (!(p.gaussian_sigma >= 0.0) || !(p.correlation_scale >= 0.0) || !(p.gamma_shape >= 0.0))
    throw Error(ErrorCode::invalid_input, "depth noise parameters must be non-negative");
}

void validate(const MaskNoiseParams& p) {
  if (!(p.salt_pepper_rate >= 0.0 && p.salt_pepper_rate < 1.0))
    throw Error(ErrorCode::invalid_input, "salt-pepper rate outside [0, 1)");
  if (p.closing_radius < 0)
    throw Error(ErrorCode::invalid_input, "closing radius must be non-negative");
}

void validate(const FlowNoiseParams& p) {
  if (!(p.per_pixel_sigma >= 0.0) || !(p.bias_sigma >= 0.0))
    throw Error(ErrorCode::invalid_input, "flow noise parameters must be non-negative");
}

template <typename Fn>
void for_rows(int height, Exec exec, Fn fn) {
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int y = 0; y < height; ++y) fn(y);
  } else {
    for (int y = 0; y < height; ++y) fn(y);
  }
}

}  // namespace

DepthImage depth_noise(const DepthImage& in, const DepthNoiseParams& params, std::uint64_t seed,
                       Exec exec) {
  validate(params);
  const int w = in.width, h = in.height;
  DepthImage out(w, h);

  std::vector<double> field;
  if (params.gaussian_sigma > 0.0) {
    // White field, box-averaged over the correlation window. Dividing by
    // sqrt(count) keeps the per-pixel variance at sigma^2 even where the
    // window is clipped.
    std::vector<double> white(in.data.size());
    for_rows(h, exec, [&](int y) {
      for (int x = 0; x < w; ++x) {
        const size_t idx = static_cast<size_t>(y) * w + x;
        white[idx] = Rng(derive_seed(seed, {1, idx})).normal();
      }
    });
    const int r = static_cast<int>(std::floor(params.correlation_scale / 2.0));
    if (r <= 0) {
      field = std::move(white);
      for (auto& v : field) v *= params.gaussian_sigma;
    } else {
      std::vector<double> hsum(in.data.size(), 0.0);
      for_rows(h, exec, [&](int y) {
        for (int x = 0; x < w; ++x) {
          const int x0 = std::max(0, x - r), x1 = std::min(w - 1, x + r);
          double s = 0.0;
          for (int k = x0; k <= x1; ++k) s += white[static_cast<size_t>(y) * w + k];
          hsum[static_cast<size_t>(y) * w + x] = s;
        }
      });
      field.assign(in.data.size(), 0.0);
      for_rows(h, exec, [&](int y) {
        const int y0 = std::max(0, y - r), y1 = std::min(h - 1, y + r);
        for (int x = 0; x < w; ++x) {
          double s = 0.0;
          for (int k = y0; k <= y1; ++k) s += hsum[static_cast<size_t>(k) * w + x];
          const int x0 = std::max(0, x - r), x1 = std::min(w - 1, x + r);
          const double count = static_cast<double>((x1 - x0 + 1) * (y1 - y0 + 1));
          field[static_cast<size_t>(y) * w + x] = params.gaussian_sigma * s / std::sqrt(count);
        }
      });
    }
  }

  for_rows(h, exec, [&](int y) {
    for (int x = 0; x < w; ++x) {
      const size_t idx = static_cast<size_t>(y) * w + x;
      const float d = in.data[idx];
      if (!(d > 0.0f)) {
        out.data[idx] = 0.0f;
        continue;
      }
      double v = d;
      if (params.gamma_shape > 0.0) {
        Rng g(derive_seed(seed, {2, idx}));
        v *= g.gamma(params.gamma_shape) / params.gamma_shape;
      }
      if (!field.empty()) v += field[idx];
      out.data[idx] = static_cast<float>(std::max(0.0, v));
    }
  });
  return out;
}

Image<std::uint8_t> mask_noise(const Image<std::uint8_t>& in, const MaskNoiseParams& params,
                               std::uint64_t seed, Exec exec) {
  validate(params);
  const int w = in.width, h = in.height;
  Image<std::uint8_t> flipped(w, h);
  for_rows(h, exec, [&](int y) {
    for (int x = 0; x < w; ++x) {
      const size_t idx = static_cast<size_t>(y) * w + x;
      std::uint8_t v = in.data[idx] ? 1 : 0;
      if (params.salt_pepper_rate > 0.0 &&
          Rng(derive_seed(seed, {3, idx})).uniform() < params.salt_pepper_rate)
        v = 1 - v;
      flipped.data[idx] = v;
    }
  });
  if (params.closing_radius <= 0) return flipped;

  const int r = params.closing_radius;
  std::vector<std::pair<int, int>> disk;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx)
      if (dx * dx + dy * dy <= r * r) disk.emplace_back(dx, dy);

  auto morph = [&](const Image<std::uint8_t>& src, bool dilate) {
    Image<std::uint8_t> dst(w, h);
    for_rows(h, exec, [&](int y) {
      for (int x = 0; x < w; ++x) {
        std::uint8_t acc = dilate ? 0 : 1;
        for (const auto& [dx, dy] : disk) {
          const int xx = x + dx, yy = y + dy;
          if (xx < 0 || xx >= w || yy < 0 || yy >= h) continue;
          const std::uint8_t v = src(xx, yy);
          if (dilate && v) {
            acc = 1;
            break;
          }
          if (!dilate && !v) {
            acc = 0;
            break;
          }
        }
        dst(x, y) = acc;
      }
    });
    return dst;
  };
  return morph(morph(flipped, true), false);
}

FlowImage flow_noise(const FlowImage& in, const FlowNoiseParams& params, std::uint64_t seed,
                     Exec exec) {
  validate(params);
  FlowImage out = in;
  Vec3 bias = Vec3::Zero();
  if (params.bias_sigma > 0.0) {
    Rng g(derive_seed(seed, {4}));
    bias = Vec3(g.normal(), g.normal(), g.normal()) * params.bias_sigma;
  }
  for_rows(in.height, exec, [&](int y) {
    for (int x = 0; x < in.width; ++x) {
      if (!out.supported(x, y)) continue;
      Vec3 v = out.at(x, y) + bias;
      if (params.per_pixel_sigma > 0.0) {
        const size_t idx = static_cast<size_t>(y) * in.width + x;
        Rng g(derive_seed(seed, {5, idx}));
        v += Vec3(g.normal(), g.normal(), g.normal()) * params.per_pixel_sigma;
      }
      out.set(x, y, v);
    }
  });
  return out;
}

}  // namespace artic
