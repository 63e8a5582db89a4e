#include "artic/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace artic {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::missing_entity, "cannot open for reading: " + path.string());
  return in;
}

void check_written(const std::ostream& out, const std::filesystem::path& path) {
  if (!out) throw Error(ErrorCode::io_error, "write failed: " + path.string());
}

struct PfmHeader {
  bool color = false;
  int width = 0;
  int height = 0;
  bool little_endian = true;
};

PfmHeader read_pfm_header(std::istream& in, const std::filesystem::path& path) {
  std::string magic;
  int w = 0, h = 0;
  double scale = 0.0;
  if (!(in >> magic >> w >> h >> scale)) {
    throw Error(ErrorCode::parse_error, "malformed PFM header: " + path.string());
  }
  if (magic != "PF" && magic != "Pf") {
    throw Error(ErrorCode::parse_error, "bad PFM magic: " + path.string());
  }
  if (w <= 0 || h <= 0 || scale == 0.0 || !std::isfinite(scale)) {
    throw Error(ErrorCode::parse_error, "bad PFM dimensions or scale: " + path.string());
  }
  in.get();  // single whitespace separating header from raster
  PfmHeader header;
  header.color = magic == "PF";
  header.width = w;
  header.height = h;
  header.little_endian = scale < 0.0;
  return header;
}

std::vector<float> read_pfm_raster(std::istream& in, const PfmHeader& header,
                                   const std::filesystem::path& path) {
  const std::size_t channels = header.color ? 3 : 1;
  const std::size_t count = std::size_t(header.width) * header.height * channels;
  std::vector<float> raster(count);
  in.read(reinterpret_cast<char*>(raster.data()), std::streamsize(count * sizeof(float)));
  if (std::size_t(in.gcount()) != count * sizeof(float)) {
    throw Error(ErrorCode::parse_error, "truncated PFM raster: " + path.string());
  }
  if (in.get() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::parse_error, "trailing bytes after PFM raster: " + path.string());
  }
  if (!header.little_endian) {
    for (float& f : raster) {
      std::uint32_t bits;
      std::memcpy(&bits, &f, 4);
      bits = __builtin_bswap32(bits);
      std::memcpy(&f, &bits, 4);
    }
  }
  for (const float f : raster) {
    if (!std::isfinite(f)) {
      throw Error(ErrorCode::parse_error, "non-finite PFM value: " + path.string());
    }
  }
  return raster;
}

void write_pfm_raster(std::ostream& out, const char* magic, int width, int height,
                      const std::vector<float>& raster) {
  out << magic << "\n" << width << " " << height << "\n-1.0\n";
  out.write(reinterpret_cast<const char*>(raster.data()),
            std::streamsize(raster.size() * sizeof(float)));
}

}  // namespace

void write_pfm(const std::filesystem::path& path, const DepthImage& image) {
  std::vector<float> raster(image.pixel_count());
  // PFM rows run bottom-to-top.
  for (int y = 0; y < image.height; ++y) {
    const int src_y = image.height - 1 - y;
    std::memcpy(raster.data() + std::size_t(y) * image.width,
                image.data.data() + std::size_t(src_y) * image.width,
                std::size_t(image.width) * sizeof(float));
  }
  auto out = open_out(path);
  write_pfm_raster(out, "Pf", image.width, image.height, raster);
  check_written(out, path);
}

DepthImage read_pfm_gray(const std::filesystem::path& path) {
  auto in = open_in(path);
  const PfmHeader header = read_pfm_header(in, path);
  if (header.color) throw Error(ErrorCode::parse_error, "expected grayscale PFM: " + path.string());
  const std::vector<float> raster = read_pfm_raster(in, header, path);
  DepthImage image(header.width, header.height);
  for (int y = 0; y < header.height; ++y) {
    const int src_y = header.height - 1 - y;
    std::memcpy(image.data.data() + std::size_t(y) * header.width,
                raster.data() + std::size_t(src_y) * header.width,
                std::size_t(header.width) * sizeof(float));
  }
  return image;
}

void write_pfm(const std::filesystem::path& path, const FlowImage& image) {
  std::vector<float> raster(std::size_t(image.width) * image.height * 3);
  for (int y = 0; y < image.height; ++y) {
    const int src_y = image.height - 1 - y;
    for (int x = 0; x < image.width; ++x) {
      const std::size_t src = (std::size_t(src_y) * image.width + x) * 3;
      const std::size_t dst = (std::size_t(y) * image.width + x) * 3;
      raster[dst] = float(image.data[src]);
      raster[dst + 1] = float(image.data[src + 1]);
      raster[dst + 2] = float(image.data[src + 2]);
    }
  }
  auto out = open_out(path);
  write_pfm_raster(out, "PF", image.width, image.height, raster);
  check_written(out, path);
}

FlowImage read_pfm_flow(const std::filesystem::path& path) {
  auto in = open_in(path);
  const PfmHeader header = read_pfm_header(in, path);
  if (!header.color) throw Error(ErrorCode::parse_error, "expected 3-channel PFM: " + path.string());
  const std::vector<float> raster = read_pfm_raster(in, header, path);
  FlowImage image(header.width, header.height);
  for (int y = 0; y < header.height; ++y) {
    const int src_y = header.height - 1 - y;
    for (int x = 0; x < header.width; ++x) {
      const std::size_t src = (std::size_t(src_y) * header.width + x) * 3;
      const float fx = raster[src];
      const float fy = raster[src + 1];
      const float fz = raster[src + 2];
      if (fx != 0.0f || fy != 0.0f || fz != 0.0f) {
        image.set(x, y, Vec3(fx, fy, fz));
      }
    }
  }
  return image;
}

void write_pgm16(const std::filesystem::path& path, const SegImage& image) {
  auto out = open_out(path);
  out << "P5\n" << image.width << " " << image.height << "\n65535\n";
  std::vector<unsigned char> row(std::size_t(image.width) * 2);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const std::uint16_t v = image(x, y);
      row[std::size_t(x) * 2] = (unsigned char)(v >> 8);
      row[std::size_t(x) * 2 + 1] = (unsigned char)(v & 0xFF);
    }
    out.write(reinterpret_cast<const char*>(row.data()), std::streamsize(row.size()));
  }
  check_written(out, path);
}

SegImage read_pgm16(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string magic;
  if (!(in >> magic) || magic != "P5") {
    throw Error(ErrorCode::parse_error, "bad PGM magic: " + path.string());
  }
  auto next_int = [&](const char* what) {
    // Skip whitespace and '#' comment lines between header tokens.
    for (;;) {
      const int c = in.peek();
      if (c == '#') {
        std::string line;
        std::getline(in, line);
      } else if (std::isspace(c)) {
        in.get();
      } else {
        break;
      }
    }
    long v = -1;
    if (!(in >> v) || v < 0) {
      throw Error(ErrorCode::parse_error, std::string("bad PGM ") + what + ": " + path.string());
    }
    return v;
  };
  const long w = next_int("width");
  const long h = next_int("height");
  const long maxval = next_int("maxval");
  if (w <= 0 || h <= 0 || maxval <= 255 || maxval > 65535) {
    throw Error(ErrorCode::parse_error, "bad PGM header: " + path.string());
  }
  in.get();
  SegImage image{int(w), int(h)};
  std::vector<unsigned char> raw(std::size_t(w) * h * 2);
  in.read(reinterpret_cast<char*>(raw.data()), std::streamsize(raw.size()));
  if (std::size_t(in.gcount()) != raw.size()) {
    throw Error(ErrorCode::parse_error, "truncated PGM raster: " + path.string());
  }
  if (in.get() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::parse_error, "trailing bytes after PGM raster: " + path.string());
  }
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    image.data[i] = std::uint16_t((raw[i * 2] << 8) | raw[i * 2 + 1]);
  }
  return image;
}

Json load_json(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::parse_error, "malformed JSON in " + path.string() + ": " + e.what());
  }
}

void save_json(const std::filesystem::path& path, const Json& j) {
  auto out = open_out(path);
  out << j.dump(2) << "\n";
  check_written(out, path);
}

std::string read_file_bytes(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace artic
