#pragma once

// File formats and benchmark inputs: homography text files, frame and
// descriptor text files, patch sampling, the Oxford directory layout, and a
// synthetic stand-in suite.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mclamp/descriptor.hpp"
#include "mclamp/geometry.hpp"
#include "mclamp/grid.hpp"
#include "mclamp/image.hpp"
#include "mclamp/matching.hpp"

namespace mclamp {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultMagnification = 3.0;

// Nine whitespace-separated numbers, row-major.
Homography parse_homography(std::string_view text);
Homography load_homography(const std::filesystem::path& path);

// One feature per line: x y scale orientation [d_1 ... d_L]. Blank lines and
// lines starting with '#' are ignored. Descriptors that are not unit length
// are renormalized on load.
struct FrameFile {
  std::vector<FeatureFrame> frames;
  std::vector<NormalizedDescriptor> descriptors;  // empty when the file has none

  bool has_descriptors() const { return !descriptors.empty(); }
};

FrameFile parse_frames(std::string_view text, std::optional<std::size_t> expected_descriptor_len = std::nullopt);
FrameFile load_frames(const std::filesystem::path& path,
                      std::optional<std::size_t> expected_descriptor_len = std::nullopt);

// Writes the .desc format: the frame columns followed by the descriptor,
// with 17 significant digits so a reload is bit-exact.
std::string format_descriptor_set(const DescriptorSet& set);
void write_descriptor_set(const std::filesystem::path& path, const DescriptorSet& set);

// Samples the normalized patch of `frame`. The patch radius covers
// magnification * scale image pixels. Returns nullopt (skip the frame)
// when that disc does not fit inside the image.
std::optional<Patch> extract_patch(const GrayImage& image, const FeatureFrame& frame, const HistogramGrid& grid,
                                   double magnification = kDefaultMagnification);

// Oxford layout: <root>/<category>/img1..img6.pgm, H1to2p..H1to6p and, since
// no detector is bundled, img1..img6.frames.
struct Sequence {
  std::string name;
  std::vector<GrayImage> images;         // 6
  std::vector<Homography> homographies;  // image 1 -> image k, k = 2..6
};

Sequence load_sequence(const std::filesystem::path& dir);

struct PairSpec {
  std::string category;
  int target = 2;  // image index k of the pair (1, k)
  std::filesystem::path image_a, image_b, frames_a, frames_b, homography;
};

struct OxfordScan {
  std::vector<PairSpec> pairs;
  std::vector<std::string> skipped;  // human-readable reasons
};

OxfordScan scan_oxford(const std::filesystem::path& root);

// Stand-in inputs for desk-scale experiments.
GrayImage make_texture(int width, int height, std::uint64_t seed);

// b(q) = a(h^-1 q) with bilinear sampling and edge replication, then i.i.d.
// Gaussian noise. noise_sd is a fraction of full scale (1.0 = 255 levels).
struct SynthPair {
  GrayImage a;
  GrayImage b;
  Homography h;
};

SynthPair synth_pair(const GrayImage& texture, const Homography& h, double noise_sd, std::uint64_t seed);

struct SynthOptions {
  int cases = 6;
  int width = 320;
  int height = 320;
  double max_rotation = 20.0 * 3.14159265358979323846 / 180.0;
  double max_scale = 1.3;
  double noise_sd = 2.0 / 255.0;
  int frames_per_image = 250;
  double min_frame_scale = 3.0;
  double max_frame_scale = 5.0;
  // Detector stand-in: per-image localization noise.
  double position_jitter = 1.5;      // pixels
  double scale_jitter = 0.10;        // relative
  double orientation_jitter = 0.2;   // radians
  double keep_fraction = 0.85;       // frames re-detected in image b
  double distractor_fraction = 0.15; // extra unrelated frames in image b
  std::uint64_t seed = 1;
};

struct SynthCase {
  std::string name;
  SynthPair pair;
  std::vector<FeatureFrame> frames_a;
  std::vector<FeatureFrame> frames_b;
};

// Homographies rotate about the image center by up to max_rotation and scale
// by up to max_scale, spread evenly across cases.
std::vector<SynthCase> make_synthetic_suite(const SynthOptions& options);

}  // namespace mclamp
