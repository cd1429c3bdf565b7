#include "mclamp/dataset.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>

namespace mclamp {
namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<double> parse_numbers(std::string_view line, std::size_t line_no) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + end, v);
    if (ec != std::errc() || ptr != line.data() + end || !std::isfinite(v))
      throw ParseError("line " + std::to_string(line_no) + ": bad number '" +
                       std::string(line.substr(pos, end - pos)) + "'");
    out.push_back(v);
    pos = end;
  }
  return out;
}

// Fills [0, 1] noise of the given cell size, bilinearly interpolated.
void add_value_noise(GrayImage& img, int cell, double amplitude, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const int gw = img.width / cell + 2;
  const int gh = img.height / cell + 2;
  std::vector<double> lattice(static_cast<std::size_t>(gw) * gh);
  for (double& v : lattice) v = unit(rng);
  for (int j = 0; j < img.height; ++j) {
    const double gy = static_cast<double>(j) / cell;
    const int y0 = static_cast<int>(gy);
    const double ty = gy - y0;
    for (int i = 0; i < img.width; ++i) {
      const double gx = static_cast<double>(i) / cell;
      const int x0 = static_cast<int>(gx);
      const double tx = gx - x0;
      const auto l = [&](int x, int y) { return lattice[static_cast<std::size_t>(y) * gw + x]; };
      const double top = l(x0, y0) + tx * (l(x0 + 1, y0) - l(x0, y0));
      const double bot = l(x0, y0 + 1) + tx * (l(x0 + 1, y0 + 1) - l(x0, y0 + 1));
      img.at(i, j) += static_cast<float>(amplitude * (top + ty * (bot - top)));
    }
  }
}

FeatureFrame jitter(FeatureFrame f, const SynthOptions& o, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  f.x += o.position_jitter * gauss(rng);
  f.y += o.position_jitter * gauss(rng);
  f.scale *= std::exp(o.scale_jitter * gauss(rng));
  f.orientation += o.orientation_jitter * gauss(rng);
  return f;
}

}  // namespace

Homography parse_homography(std::string_view text) {
  std::vector<double> values;
  std::size_t line_no = 0;
  std::istringstream lines{std::string(text)};
  for (std::string line; std::getline(lines, line);) {
    ++line_no;
    for (double v : parse_numbers(line, line_no)) values.push_back(v);
  }
  if (values.size() != 9)
    throw ParseError("homography needs 9 numbers, found " + std::to_string(values.size()));
  std::array<double, 9> m{};
  std::copy(values.begin(), values.end(), m.begin());
  try {
    return Homography(m);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

Homography load_homography(const std::filesystem::path& path) {
  try {
    return parse_homography(read_text(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

FrameFile parse_frames(std::string_view text, std::optional<std::size_t> expected_descriptor_len) {
  FrameFile out;
  std::optional<std::size_t> columns;
  std::size_t line_no = 0;
  std::istringstream lines{std::string(text)};
  for (std::string line; std::getline(lines, line);) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const std::vector<double> row = parse_numbers(line, line_no);
    if (!columns) {
      columns = row.size();
      if (row.size() < 4) throw ParseError("line " + std::to_string(line_no) + ": need at least 4 columns");
      if (row.size() > 4 && expected_descriptor_len && row.size() - 4 != *expected_descriptor_len)
        throw ParseError("descriptor length " + std::to_string(row.size() - 4) + " does not match expected " +
                         std::to_string(*expected_descriptor_len));
    } else if (row.size() != *columns) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(*columns) +
                       " columns, found " + std::to_string(row.size()));
    }
    FeatureFrame f{row[0], row[1], row[2], row[3]};
    if (!f.valid()) throw ParseError("line " + std::to_string(line_no) + ": frame scale must be positive");
    out.frames.push_back(f);
    if (row.size() > 4) {
      NormalizedDescriptor d;
      d.bins.assign(row.begin() + 4, row.end());
      double sum_sq = 0.0;
      for (double b : d.bins) {
        if (b < 0.0) throw ParseError("line " + std::to_string(line_no) + ": negative descriptor bin");
        sum_sq += b * b;
      }
      // Unit vectors written by this tool reload bit-exactly.
      if (sum_sq > 0.0 && std::fabs(std::sqrt(sum_sq) - 1.0) > 1e-12) d = normalize(d.bins);
      out.descriptors.push_back(std::move(d));
    }
  }
  return out;
}

FrameFile load_frames(const std::filesystem::path& path, std::optional<std::size_t> expected_descriptor_len) {
  try {
    return parse_frames(read_text(path), expected_descriptor_len);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string format_descriptor_set(const DescriptorSet& set) {
  set.validate();
  std::ostringstream out;
  out << std::setprecision(17);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const FeatureFrame& f = set.frames[i];
    out << f.x << ' ' << f.y << ' ' << f.scale << ' ' << f.orientation;
    for (double b : set.descriptors[i].bins) out << ' ' << b;
    out << '\n';
  }
  return out.str();
}

void write_descriptor_set(const std::filesystem::path& path, const DescriptorSet& set) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << format_descriptor_set(set);
}

std::optional<Patch> extract_patch(const GrayImage& image, const FeatureFrame& frame, const HistogramGrid& grid,
                                   double magnification) {
  grid.validate();
  if (!(magnification > 0.0)) throw std::invalid_argument("magnification must be positive");
  if (!frame.valid()) return std::nullopt;
  const double reach = magnification * frame.scale;
  if (frame.x - reach < 0.0 || frame.y - reach < 0.0 || frame.x + reach > image.width ||
      frame.y + reach > image.height)
    return std::nullopt;

  const int side = grid.patch_side();
  const double step = reach / grid.lambda_patch;
  const double cs = std::cos(frame.orientation) * step;
  const double sn = std::sin(frame.orientation) * step;
  const double half = side / 2.0;
  std::vector<double> values(static_cast<std::size_t>(side) * side);
  for (int r = 0; r < side; ++r) {
    const double v = r + 0.5 - half;
    for (int c = 0; c < side; ++c) {
      const double u = c + 0.5 - half;
      values[static_cast<std::size_t>(r) * side + c] =
          image.sample(frame.x + cs * u - sn * v, frame.y + sn * u + cs * v);
    }
  }
  return Patch(side, std::move(values));
}

Sequence load_sequence(const std::filesystem::path& dir) {
  Sequence seq;
  seq.name = dir.filename().string();
  for (int k = 1; k <= 6; ++k) seq.images.push_back(read_pgm(dir / ("img" + std::to_string(k) + ".pgm")));
  for (int k = 2; k <= 6; ++k) seq.homographies.push_back(load_homography(dir / ("H1to" + std::to_string(k) + "p")));
  return seq;
}

OxfordScan scan_oxford(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw std::runtime_error("dataset root is not a directory: " + root.string());
  std::vector<fs::path> categories;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory()) categories.push_back(entry.path());
  std::sort(categories.begin(), categories.end());

  OxfordScan scan;
  for (const auto& dir : categories) {
    const std::string name = dir.filename().string();
    for (int k = 2; k <= 6; ++k) {
      PairSpec spec;
      spec.category = name;
      spec.target = k;
      spec.image_a = dir / "img1.pgm";
      spec.image_b = dir / ("img" + std::to_string(k) + ".pgm");
      spec.frames_a = dir / "img1.frames";
      spec.frames_b = dir / ("img" + std::to_string(k) + ".frames");
      spec.homography = dir / ("H1to" + std::to_string(k) + "p");
      std::string missing;
      for (const auto* p : {&spec.image_a, &spec.image_b, &spec.frames_a, &spec.frames_b, &spec.homography})
        if (!fs::exists(*p)) missing += (missing.empty() ? "" : ", ") + p->filename().string();
      if (missing.empty())
        scan.pairs.push_back(std::move(spec));
      else
        scan.skipped.push_back(name + " 1-" + std::to_string(k) + ": missing " + missing);
    }
  }
  return scan;
}

GrayImage make_texture(int width, int height, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GrayImage img(width, height, 0.0f);
  for (int cell : {48, 24, 12, 6, 3}) add_value_noise(img, cell, std::pow(cell / 48.0, 0.5), rng);

  // Sharp-edged shapes on top of the smooth field.
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const int shapes = width * height / 1200;
  for (int s = 0; s < shapes; ++s) {
    const double cx = u01(rng) * width;
    const double cy = u01(rng) * height;
    const double rx = 3.0 + 12.0 * u01(rng);
    const double ry = 3.0 + 12.0 * u01(rng);
    const double angle = u01(rng) * std::numbers::pi;
    const double level = 2.0 * u01(rng) - 1.0;
    const bool disc = u01(rng) < 0.5;
    const double ca = std::cos(angle), sa = std::sin(angle);
    const int reach = static_cast<int>(std::ceil(std::max(rx, ry) * 1.5));
    for (int j = std::max(0, static_cast<int>(cy) - reach); j < std::min(height, static_cast<int>(cy) + reach); ++j) {
      for (int i = std::max(0, static_cast<int>(cx) - reach); i < std::min(width, static_cast<int>(cx) + reach); ++i) {
        const double dx = i + 0.5 - cx, dy = j + 0.5 - cy;
        const double u = (ca * dx + sa * dy) / rx;
        const double v = (-sa * dx + ca * dy) / ry;
        const bool inside = disc ? u * u + v * v <= 1.0 : std::fabs(u) <= 1.0 && std::fabs(v) <= 1.0;
        if (inside) img.at(i, j) = static_cast<float>(level);
      }
    }
  }

  // Map to the 8-bit range with some saturation at both ends.
  double mean = 0.0, sq = 0.0;
  for (float v : img.pixels) mean += v;
  mean /= static_cast<double>(img.pixels.size());
  for (float v : img.pixels) sq += (v - mean) * (v - mean);
  const double sd = std::sqrt(sq / static_cast<double>(img.pixels.size()));
  for (float& v : img.pixels) v = static_cast<float>(std::clamp(128.0 + 60.0 * (v - mean) / sd, 0.0, 255.0));
  return img;
}

SynthPair synth_pair(const GrayImage& texture, const Homography& h, double noise_sd, std::uint64_t seed) {
  if (!(noise_sd >= 0.0)) throw std::invalid_argument("noise sd must be nonnegative");
  const Homography inv = h.inverse();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, noise_sd * 255.0);
  const auto noisy = [&](double v) {
    return noise_sd > 0.0 ? static_cast<float>(std::clamp(v + gauss(rng), 0.0, 255.0)) : static_cast<float>(v);
  };

  SynthPair out{texture, GrayImage(texture.width, texture.height), h};
  for (float& v : out.a.pixels) v = noisy(v);
  for (int j = 0; j < texture.height; ++j) {
    for (int i = 0; i < texture.width; ++i) {
      const Point2 src = inv.apply({i + 0.5, j + 0.5});
      out.b.at(i, j) = noisy(texture.sample(src.x, src.y));
    }
  }
  return out;
}

std::vector<SynthCase> make_synthetic_suite(const SynthOptions& o) {
  if (o.cases < 1) throw std::invalid_argument("synthetic suite needs at least one case");
  std::vector<SynthCase> suite;
  for (int c = 0; c < o.cases; ++c) {
    const std::uint64_t case_seed = o.seed * 1000003ULL + static_cast<std::uint64_t>(c);
    std::mt19937_64 rng(case_seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    const double level = static_cast<double>(c + 1) / o.cases;
    const double angle = (c % 2 == 0 ? 1.0 : -1.0) * o.max_rotation * level;
    const double zoom = 1.0 + (o.max_scale - 1.0) * level;
    const double cx = o.width / 2.0, cy = o.height / 2.0;
    // Rotate and scale about the image center.
    const Homography rs = Homography::similarity(zoom, angle, 0.0, 0.0);
    const Point2 moved = rs.apply({cx, cy});
    const Homography h = Homography::similarity(zoom, angle, cx - moved.x, cy - moved.y);

    SynthCase sc;
    sc.name = "synth" + std::to_string(c + 1);
    sc.pair = synth_pair(make_texture(o.width, o.height, case_seed), h, o.noise_sd, case_seed + 17);

    const double margin = kDefaultMagnification * o.max_frame_scale + 1.0;
    const auto random_frame = [&](double scale_lo, double scale_hi) {
      FeatureFrame f;
      f.x = margin + u01(rng) * (o.width - 2.0 * margin);
      f.y = margin + u01(rng) * (o.height - 2.0 * margin);
      f.scale = scale_lo + u01(rng) * (scale_hi - scale_lo);
      f.orientation = u01(rng) * 2.0 * std::numbers::pi;
      return f;
    };
    for (int i = 0; i < o.frames_per_image; ++i) {
      const FeatureFrame fa = random_frame(o.min_frame_scale, o.max_frame_scale);
      sc.frames_a.push_back(fa);
      if (u01(rng) < o.keep_fraction) sc.frames_b.push_back(jitter(h.map_frame(fa), o, rng));
    }
    const int distractors = static_cast<int>(std::lround(o.distractor_fraction * o.frames_per_image));
    for (int i = 0; i < distractors; ++i)
      sc.frames_b.push_back(random_frame(o.min_frame_scale * zoom, o.max_frame_scale * zoom));
    suite.push_back(std::move(sc));
  }
  return suite;
}

}  // namespace mclamp
