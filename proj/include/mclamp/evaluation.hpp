#pragma once

// Ground-truth correspondences from a homography, precision-recall sweeps
// over a distance threshold, and average precision.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "mclamp/geometry.hpp"
#include "mclamp/matching.hpp"

namespace mclamp {

using IndexPair = std::pair<std::size_t, std::size_t>;

inline constexpr int kDefaultSweepSamples = 100;

// Intersection over union of frame A's disc, carried into image B by the
// local affine approximation of h, and frame B's disc. Rasterized on a
// 64x64 grid over the joint bounding box, refined to 256x256 near 0.5.
double region_overlap(const FeatureFrame& fa, const FeatureFrame& fb, const Homography& h);

// One-to-one pairs with overlap > 0.5, chosen greedily by decreasing
// overlap. Sorted by (index_a, index_b).
std::vector<IndexPair> correspondences(std::span<const FeatureFrame> frames_a,
                                       std::span<const FeatureFrame> frames_b, const Homography& h);

struct PRPoint {
  double threshold = 0.0;
  double recall = 0.0;
  double one_minus_precision = 0.0;  // 0 when there are no matches
  std::size_t correct = 0;
  std::size_t false_matches = 0;

  std::size_t matches() const { return correct + false_matches; }
};

struct PRCurve {
  std::vector<PRPoint> points;
  int sample_count = kDefaultSweepSamples;
  std::size_t correspondences = 0;
};

struct APResult {
  double ap = 0.0;
  std::vector<std::size_t> correct_matches;
  std::vector<std::size_t> false_matches;
  std::size_t correspondences = 0;
};

// `samples` thresholds spread uniformly over [min, max] of the finite
// distances. Falls back to [0, 2] when nothing is finite and widens a
// zero-width range to [min, min + 1].
std::vector<double> sweep_thresholds(const DistanceTable& distances, int samples = kDefaultSweepSamples);

PRCurve pr_curve(const DistanceTable& distances, std::span<const IndexPair> correspondence_set,
                 int samples = kDefaultSweepSamples);

// Same curve from explicit match sets, one per threshold, in sweep order.
PRCurve pr_curve(std::span<const MatchSet> match_sets, std::span<const IndexPair> correspondence_set);

// Mean over recall positions i / (n - 1), i = 0..n-1, of the best precision
// reached at recall >= that position. Zero when nothing ever matches.
APResult average_precision(const PRCurve& curve);

double mean_ap(std::span<const double> aps);
double mean_ap(std::span<const APResult> results);

struct PairEvaluation {
  PRCurve curve;
  APResult result;
};

// Full protocol for one image pair. Empty descriptor sets give AP 0.
PairEvaluation evaluate_pair(const DescriptorSet& a, const DescriptorSet& b, const Homography& h,
                             int samples = kDefaultSweepSamples);

}  // namespace mclamp
