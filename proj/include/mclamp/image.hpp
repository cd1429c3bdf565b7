#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

namespace mclamp {

// Single-channel raster on the 8-bit gray scale. Pixel (i, j) covers the
// continuous square [i, i+1) x [j, j+1), so its center is (i + 0.5, j + 0.5).
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<float> pixels;  // row-major

  GrayImage() = default;
  GrayImage(int w, int h, float fill = 0.0f);

  float at(int i, int j) const { return pixels[static_cast<std::size_t>(j) * width + i]; }
  float& at(int i, int j) { return pixels[static_cast<std::size_t>(j) * width + i]; }

  // Bilinear sample at continuous coordinates; outside samples replicate
  // the nearest edge pixel.
  double sample(double x, double y) const;
};

// Binary (P5) and ASCII (P2) PGM. Values are rescaled to 0..255 when the
// file's maxval differs. Throws std::runtime_error on malformed input.
GrayImage parse_pgm(std::string_view bytes);
GrayImage read_pgm(const std::filesystem::path& path);

// Writes binary P5 with values rounded and clipped to 0..255.
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

}  // namespace mclamp
