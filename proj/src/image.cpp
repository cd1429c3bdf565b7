#include "mclamp/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>

namespace mclamp {
namespace {

class PgmReader {
 public:
  explicit PgmReader(std::string_view bytes) : bytes_(bytes) {}

  // Next whitespace-delimited header token, skipping # comments.
  long token() {
    for (;;) {
      while (pos_ < bytes_.size() && std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
      if (pos_ < bytes_.size() && bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (start == pos_) throw std::runtime_error("malformed PGM: expected a number");
    return std::stol(std::string(bytes_.substr(start, pos_ - start)));
  }

  std::string_view magic() {
    if (bytes_.size() < 2) throw std::runtime_error("malformed PGM: too short");
    pos_ = 2;
    return bytes_.substr(0, 2);
  }

  // Exactly one whitespace byte separates the header from binary data.
  std::string_view binary_payload() {
    if (pos_ >= bytes_.size()) throw std::runtime_error("malformed PGM: missing raster");
    return bytes_.substr(pos_ + 1);
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage::GrayImage(int w, int h, float fill) : width(w), height(h) {
  if (w <= 0 || h <= 0) throw std::invalid_argument("image dimensions must be positive");
  pixels.assign(static_cast<std::size_t>(w) * h, fill);
}

double GrayImage::sample(double x, double y) const {
  const double fx = x - 0.5;
  const double fy = y - 0.5;
  const double x0f = std::floor(fx);
  const double y0f = std::floor(fy);
  const double tx = fx - x0f;
  const double ty = fy - y0f;
  const auto clamp_x = [this](double v) { return static_cast<int>(std::clamp(v, 0.0, static_cast<double>(width - 1))); };
  const auto clamp_y = [this](double v) { return static_cast<int>(std::clamp(v, 0.0, static_cast<double>(height - 1))); };
  const int x0 = clamp_x(x0f), x1 = clamp_x(x0f + 1.0);
  const int y0 = clamp_y(y0f), y1 = clamp_y(y0f + 1.0);
  const double top = at(x0, y0) + tx * (at(x1, y0) - at(x0, y0));
  const double bottom = at(x0, y1) + tx * (at(x1, y1) - at(x0, y1));
  return top + ty * (bottom - top);
}

GrayImage parse_pgm(std::string_view bytes) {
  PgmReader reader(bytes);
  const std::string_view magic = reader.magic();
  if (magic != "P5" && magic != "P2") throw std::runtime_error("not a PGM file (expected P2 or P5)");
  const long w = reader.token();
  const long h = reader.token();
  const long maxval = reader.token();
  if (w <= 0 || h <= 0 || w > 1 << 16 || h > 1 << 16) throw std::runtime_error("PGM has invalid dimensions");
  if (maxval <= 0 || maxval > 65535) throw std::runtime_error("PGM maxval out of range");

  GrayImage img(static_cast<int>(w), static_cast<int>(h));
  const double scale = 255.0 / static_cast<double>(maxval);
  const std::size_t n = img.pixels.size();
  if (magic == "P2") {
    for (std::size_t i = 0; i < n; ++i) {
      const long v = reader.token();
      if (v > maxval) throw std::runtime_error("PGM sample exceeds maxval");
      img.pixels[i] = static_cast<float>(v * scale);
    }
    return img;
  }
  const std::string_view data = reader.binary_payload();
  const std::size_t bytes_per = maxval > 255 ? 2 : 1;
  if (data.size() < n * bytes_per) throw std::runtime_error("PGM raster is truncated");
  for (std::size_t i = 0; i < n; ++i) {
    unsigned v = static_cast<unsigned char>(data[i * bytes_per]);
    if (bytes_per == 2) v = (v << 8) | static_cast<unsigned char>(data[i * 2 + 1]);
    img.pixels[i] = static_cast<float>(v * scale);
  }
  return img;
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open image " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_pgm(bytes);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write image " + path.string());
  out << "P5\n" << image.width << " " << image.height << "\n255\n";
  std::string raster(image.pixels.size(), '\0');
  for (std::size_t i = 0; i < image.pixels.size(); ++i)
    raster[i] = static_cast<char>(static_cast<unsigned char>(std::clamp(std::lround(image.pixels[i]), 0L, 255L)));
  out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
}

}  // namespace mclamp
