#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

// Helpers shared by the test binaries. Each test executable creates its own
// scratch directory so parallel ctest runs never collide.

namespace testsup {

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("artic-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::uint64_t file_hash(const std::filesystem::path& p) { return fnv1a(slurp(p)); }

// Order-independent hash of every regular file under a directory tree,
// including relative paths, so renames and content changes both show up.
inline std::uint64_t tree_hash(const std::filesystem::path& root) {
  std::uint64_t acc = 0;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    const std::string rel = std::filesystem::relative(e.path(), root).generic_string();
    acc ^= fnv1a(rel) ^ (file_hash(e.path()) * 0x9e3779b97f4a7c15ull);
  }
  return acc;
}

}  // namespace testsup
