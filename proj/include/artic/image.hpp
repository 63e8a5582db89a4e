#pragma once

#include <cstdint>
#include <vector>

#include "artic/types.hpp"

namespace artic {

/// Dense row-major raster; (x, y) with y increasing downward.
template <typename T>
struct Image {
  int width = 0;
  int height = 0;
  std::vector<T> data;

  Image() = default;
  Image(int w, int h, T fill = T{}) : width(w), height(h), data(std::size_t(w) * h, fill) {}

  std::size_t index(int x, int y) const { return std::size_t(y) * width + x; }
  bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
  T& operator()(int x, int y) { return data[index(x, y)]; }
  const T& operator()(int x, int y) const { return data[index(x, y)]; }
  std::size_t pixel_count() const { return data.size(); }

  bool operator==(const Image&) const = default;
};

/// Depth in meters; 0 marks no-return pixels.
using DepthImage = Image<float>;

/// Part-id map; 0 is background.
using SegImage = Image<std::uint16_t>;

/// Per-pixel 3D motion residual (camera-frame displacement, meters) plus its
/// support mask. Values are exactly zero off support.
struct FlowImage {
  int width = 0;
  int height = 0;
  std::vector<double> data;           // 3 per pixel
  std::vector<std::uint8_t> support;  // 0/1

  FlowImage() = default;
  FlowImage(int w, int h)
      : width(w), height(h), data(std::size_t(w) * h * 3, 0.0), support(std::size_t(w) * h, 0) {}

  std::size_t index(int x, int y) const { return std::size_t(y) * width + x; }

  Vec3 at(int x, int y) const {
    const std::size_t i = index(x, y) * 3;
    return {data[i], data[i + 1], data[i + 2]};
  }

  void set(int x, int y, const Vec3& v) {
    const std::size_t i = index(x, y) * 3;
    data[i] = v.x();
    data[i + 1] = v.y();
    data[i + 2] = v.z();
    support[index(x, y)] = 1;
  }

  bool supported(int x, int y) const { return support[index(x, y)] != 0; }

  bool operator==(const FlowImage&) const = default;
};

}  // namespace artic
