#pragma once

// Minimal binary PGM (P5) and PPM (P6) rasters, 8 bits per channel.

#include <cstdint>
#include <string>
#include <vector>

namespace isolat {

struct Raster {
  int width = 0;
  int height = 0;
  int channels = 1;  // 1 = grayscale, 3 = RGB
  std::vector<std::uint8_t> data;  // row-major, interleaved

  std::size_t index(int x, int y) const {
    return (static_cast<std::size_t>(y) * width + x) * channels;
  }
  bool in_frame(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

Raster make_raster(int width, int height, int channels, std::uint8_t fill = 255);

// Reads a binary PGM/PPM file with maxval up to 255. Header comments are
// accepted. Malformed input raises std::runtime_error naming the byte offset.
Raster read_raster(const std::string& path);

// Writes P5/P6 with maxval 255 and no comments, atomically
// (temp file + rename).
void write_raster(const std::string& path, const Raster& r);

}  // namespace isolat
