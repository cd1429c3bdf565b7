#include "mclamp/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <tuple>

namespace mclamp {
namespace {

constexpr double kCorrespondenceOverlap = 0.5;

// Frame A's disc after the local affine map: |inv (q - center)| <= radius.
struct Ellipse {
  Point2 center;
  Mat2 inv;
  double radius = 0.0;
  double half_w = 0.0;
  double half_h = 0.0;

  bool contains(double x, double y) const {
    const Point2 u = inv.apply({x - center.x, y - center.y});
    return u.x * u.x + u.y * u.y <= radius * radius;
  }
};

std::optional<Ellipse> map_region(const FeatureFrame& f, const Homography& h) {
  try {
    const Mat2 j = h.jacobian({f.x, f.y});
    const auto inv = j.inverse();
    if (!inv) return std::nullopt;
    Ellipse e;
    e.center = h.apply({f.x, f.y});
    e.inv = *inv;
    e.radius = f.scale;
    e.half_w = f.scale * std::hypot(j.a, j.b);
    e.half_h = f.scale * std::hypot(j.c, j.d);
    return e;
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
}

bool boxes_disjoint(const Ellipse& e, const FeatureFrame& fb) {
  return e.center.x + e.half_w <= fb.x - fb.scale || fb.x + fb.scale <= e.center.x - e.half_w ||
         e.center.y + e.half_h <= fb.y - fb.scale || fb.y + fb.scale <= e.center.y - e.half_h;
}

double rasterized_iou(const Ellipse& e, const FeatureFrame& fb, int cells) {
  const double x0 = std::min(e.center.x - e.half_w, fb.x - fb.scale);
  const double x1 = std::max(e.center.x + e.half_w, fb.x + fb.scale);
  const double y0 = std::min(e.center.y - e.half_h, fb.y - fb.scale);
  const double y1 = std::max(e.center.y + e.half_h, fb.y + fb.scale);
  const double dx = (x1 - x0) / cells;
  const double dy = (y1 - y0) / cells;
  const double r2 = fb.scale * fb.scale;
  std::size_t in_a = 0, in_b = 0, both = 0;
  for (int r = 0; r < cells; ++r) {
    const double y = y0 + (r + 0.5) * dy;
    for (int c = 0; c < cells; ++c) {
      const double x = x0 + (c + 0.5) * dx;
      const bool a = e.contains(x, y);
      const bool b = (x - fb.x) * (x - fb.x) + (y - fb.y) * (y - fb.y) <= r2;
      in_a += a;
      in_b += b;
      both += a && b;
    }
  }
  const std::size_t uni = in_a + in_b - both;
  return uni == 0 ? 0.0 : static_cast<double>(both) / static_cast<double>(uni);
}

double overlap_of(const Ellipse& e, const FeatureFrame& fb) {
  if (boxes_disjoint(e, fb)) return 0.0;
  const double coarse = rasterized_iou(e, fb, 64);
  if (std::fabs(coarse - kCorrespondenceOverlap) < 0.05) return rasterized_iou(e, fb, 256);
  return coarse;
}

double safe_ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

PRPoint make_point(double t, std::size_t correct, std::size_t wrong, std::size_t n_corr) {
  PRPoint p;
  p.threshold = t;
  p.correct = correct;
  p.false_matches = wrong;
  p.recall = safe_ratio(correct, n_corr);
  p.one_minus_precision = safe_ratio(wrong, correct + wrong);
  return p;
}

}  // namespace

double region_overlap(const FeatureFrame& fa, const FeatureFrame& fb, const Homography& h) {
  if (!fa.valid() || !fb.valid()) throw std::invalid_argument("invalid feature frame");
  const auto e = map_region(fa, h);
  if (!e) return 0.0;
  return overlap_of(*e, fb);
}

std::vector<IndexPair> correspondences(std::span<const FeatureFrame> frames_a,
                                       std::span<const FeatureFrame> frames_b, const Homography& h) {
  struct Candidate {
    double overlap;
    std::size_t a;
    std::size_t b;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < frames_a.size(); ++i) {
    const auto e = map_region(frames_a[i], h);
    if (!e) continue;
    for (std::size_t j = 0; j < frames_b.size(); ++j) {
      const double ov = overlap_of(*e, frames_b[j]);
      if (ov > kCorrespondenceOverlap) candidates.push_back({ov, i, j});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& l, const Candidate& r) {
    if (l.overlap != r.overlap) return l.overlap > r.overlap;
    return std::tie(l.a, l.b) < std::tie(r.a, r.b);
  });
  std::vector<bool> used_a(frames_a.size(), false), used_b(frames_b.size(), false);
  std::vector<IndexPair> out;
  for (const auto& c : candidates) {
    if (used_a[c.a] || used_b[c.b]) continue;
    used_a[c.a] = used_b[c.b] = true;
    out.emplace_back(c.a, c.b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> sweep_thresholds(const DistanceTable& distances, int samples) {
  if (samples < 2) throw std::invalid_argument("sweep needs at least 2 samples");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double d : distances.values()) {
    if (!std::isfinite(d)) continue;
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  if (!std::isfinite(lo)) {
    lo = 0.0;
    hi = 2.0;
  } else if (!(hi > lo)) {
    hi = lo + 1.0;
  }
  std::vector<double> out(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) out[i] = lo + (hi - lo) * i / (samples - 1);
  out.back() = hi;
  return out;
}

PRCurve pr_curve(const DistanceTable& distances, std::span<const IndexPair> correspondence_set, int samples) {
  const std::set<IndexPair> truth(correspondence_set.begin(), correspondence_set.end());
  std::vector<double> correct_d, false_d;
  for (std::size_t a = 0; a < distances.rows(); ++a) {
    for (std::size_t b = 0; b < distances.cols(); ++b) {
      const double d = distances(a, b);
      if (!std::isfinite(d)) continue;
      (truth.count({a, b}) ? correct_d : false_d).push_back(d);
    }
  }
  std::sort(correct_d.begin(), correct_d.end());
  std::sort(false_d.begin(), false_d.end());

  PRCurve curve;
  curve.sample_count = samples;
  curve.correspondences = truth.size();
  for (double t : sweep_thresholds(distances, samples)) {
    // Strictly below t.
    const auto n_correct = static_cast<std::size_t>(std::lower_bound(correct_d.begin(), correct_d.end(), t) - correct_d.begin());
    const auto n_false = static_cast<std::size_t>(std::lower_bound(false_d.begin(), false_d.end(), t) - false_d.begin());
    curve.points.push_back(make_point(t, n_correct, n_false, truth.size()));
  }
  return curve;
}

PRCurve pr_curve(std::span<const MatchSet> match_sets, std::span<const IndexPair> correspondence_set) {
  const std::set<IndexPair> truth(correspondence_set.begin(), correspondence_set.end());
  PRCurve curve;
  curve.sample_count = static_cast<int>(match_sets.size());
  curve.correspondences = truth.size();
  for (const auto& ms : match_sets) {
    std::size_t correct = 0;
    for (const auto& m : ms.pairs) correct += truth.count({m.index_a, m.index_b});
    curve.points.push_back(make_point(ms.threshold, correct, ms.pairs.size() - correct, truth.size()));
  }
  return curve;
}

APResult average_precision(const PRCurve& curve) {
  APResult result;
  result.correspondences = curve.correspondences;
  for (const auto& p : curve.points) {
    result.correct_matches.push_back(p.correct);
    result.false_matches.push_back(p.false_matches);
  }
  const int n = curve.sample_count;
  const bool any_matches =
      std::any_of(curve.points.begin(), curve.points.end(), [](const PRPoint& p) { return p.matches() > 0; });
  if (!any_matches || curve.correspondences == 0 || n < 1) return result;

  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double position = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    double best = 0.0;
    for (const auto& p : curve.points)
      if (p.matches() > 0 && p.recall >= position) best = std::max(best, safe_ratio(p.correct, p.matches()));
    sum += best;
  }
  result.ap = sum / n;
  return result;
}

double mean_ap(std::span<const double> aps) {
  if (aps.empty()) throw std::invalid_argument("mean AP of an empty group");
  return std::accumulate(aps.begin(), aps.end(), 0.0) / static_cast<double>(aps.size());
}

double mean_ap(std::span<const APResult> results) {
  std::vector<double> aps;
  for (const auto& r : results) aps.push_back(r.ap);
  return mean_ap(aps);
}

PairEvaluation evaluate_pair(const DescriptorSet& a, const DescriptorSet& b, const Homography& h, int samples) {
  a.validate();
  b.validate();
  PairEvaluation out;
  if (a.empty() || b.empty()) {
    out.curve.sample_count = samples;
    out.result = average_precision(out.curve);
    return out;
  }
  const auto truth = correspondences(a.frames, b.frames, h);
  out.curve = pr_curve(pairwise_distances(a, b), truth, samples);
  out.result = average_precision(out.curve);
  return out;
}

}  // namespace mclamp
