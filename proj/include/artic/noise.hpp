#pragma once

#include <cstdint>

#include "artic/image.hpp"
#include "artic/parallel.hpp"

namespace artic {

/// Additive correlated gaussian noise plus optional multiplicative gamma
/// speckle. Non-returns (depth == 0) are left untouched; noised depths are
/// clamped at zero.
struct DepthNoiseParams {
  double gaussian_sigma = 0.0;    // meters; 0 disables
  double correlation_scale = 0.0;  // box window = 2*floor(scale/2)+1; <=1 white
  double gamma_shape = 0.0;        // Gamma(k, 1/k) multiplier; 0 disables
};

/// Salt-and-pepper label flips followed by a morphological closing with a
/// disk structuring element (clipped at the borders).
struct MaskNoiseParams {
  double salt_pepper_rate = 0.0;  // flip probability in [0, 1)
  int closing_radius = 0;         // pixels; 0 disables
};

/// Shared additive bias plus independent per-pixel gaussian noise, applied
/// only on supported pixels; unsupported pixels stay exactly zero.
struct FlowNoiseParams {
  double per_pixel_sigma = 0.0;  // meters
  double bias_sigma = 0.0;       // meters, one draw per image
};

/// All corruption channels plus the base seed, as read from a noise config.
struct NoiseConfig {
  DepthNoiseParams depth;
  MaskNoiseParams mask;
  FlowNoiseParams flow;
  std::uint64_t seed = 0;
};

DepthImage depth_noise(const DepthImage& in, const DepthNoiseParams& params, std::uint64_t seed,
                       Exec exec = Exec::parallel);

Image<std::uint8_t> mask_noise(const Image<std::uint8_t>& in, const MaskNoiseParams& params,
                               std::uint64_t seed, Exec exec = Exec::parallel);

FlowImage flow_noise(const FlowImage& in, const FlowNoiseParams& params, std::uint64_t seed,
                     Exec exec = Exec::parallel);

}  // namespace artic
