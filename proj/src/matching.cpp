#include "mclamp/matching.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mclamp {

void DescriptorSet::validate() const {
  if (frames.size() != descriptors.size())
    throw std::invalid_argument("descriptor set has mismatched frame and descriptor counts");
}

DistanceTable::DistanceTable(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

DistanceTable DistanceTable::transposed() const {
  DistanceTable out(cols_, rows_);
  for (std::size_t a = 0; a < rows_; ++a)
    for (std::size_t b = 0; b < cols_; ++b) out(b, a) = (*this)(a, b);
  return out;
}

double descriptor_distance(const NormalizedDescriptor& a, const NormalizedDescriptor& b) {
  if (a.bins.size() != b.bins.size()) throw std::invalid_argument("descriptor lengths differ");
  if (a.is_sentinel() || b.is_sentinel()) return std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.bins.size(); ++i) {
    const double d = a.bins[i] - b.bins[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

DistanceTable pairwise_distances(const DescriptorSet& a, const DescriptorSet& b) {
  a.validate();
  b.validate();
  if (a.empty() || b.empty()) throw std::invalid_argument("cannot compute distances against an empty set");
  DistanceTable table(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) table(i, j) = descriptor_distance(a.descriptors[i], b.descriptors[j]);
  return table;
}

MatchSet matches_at_threshold(const DistanceTable& distances, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("match threshold must be positive");
  MatchSet out;
  out.threshold = t;
  for (std::size_t a = 0; a < distances.rows(); ++a)
    for (std::size_t b = 0; b < distances.cols(); ++b)
      if (distances(a, b) < t) out.pairs.push_back({a, b, distances(a, b)});
  return out;
}

}  // namespace mclamp
