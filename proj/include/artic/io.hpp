#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "artic/image.hpp"

namespace artic {

using Json = nlohmann::json;

/// Grayscale PFM ("Pf"), float32, scale header -1.0 (little-endian), rows
/// bottom-to-top per the format convention.
void write_pfm(const std::filesystem::path& path, const DepthImage& image);
DepthImage read_pfm_gray(const std::filesystem::path& path);

/// 3-channel PFM ("PF"); channels hold the camera-frame flow vector. Support
/// is implied: a pixel whose three stored values are exactly zero has none.
void write_pfm(const std::filesystem::path& path, const FlowImage& image);
FlowImage read_pfm_flow(const std::filesystem::path& path);

/// Binary PGM (P5), maxval 65535, big-endian samples.
void write_pgm16(const std::filesystem::path& path, const SegImage& image);
SegImage read_pgm16(const std::filesystem::path& path);

Json load_json(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const Json& j);

std::string read_file_bytes(const std::filesystem::path& path);

}  // namespace artic
