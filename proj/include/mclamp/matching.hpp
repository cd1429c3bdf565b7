#pragma once

#include <cstddef>
#include <vector>

#include "mclamp/descriptor.hpp"
#include "mclamp/geometry.hpp"

namespace mclamp {

struct DescriptorSet {
  std::vector<FeatureFrame> frames;
  std::vector<NormalizedDescriptor> descriptors;

  std::size_t size() const { return frames.size(); }
  bool empty() const { return frames.empty(); }
  void validate() const;
};

// Dense rows x cols table of Euclidean distances. Sentinel descriptors sit
// at +infinity from everything, including other sentinels.
class DistanceTable {
 public:
  DistanceTable(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t a, std::size_t b) const { return values_[a * cols_ + b]; }
  double& operator()(std::size_t a, std::size_t b) { return values_[a * cols_ + b]; }
  const std::vector<double>& values() const { return values_; }

  DistanceTable transposed() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

struct Match {
  std::size_t index_a = 0;
  std::size_t index_b = 0;
  double distance = 0.0;

  friend bool operator==(const Match&, const Match&) = default;
};

struct MatchSet {
  std::vector<Match> pairs;  // sorted by (index_a, index_b)
  double threshold = 0.0;
};

double descriptor_distance(const NormalizedDescriptor& a, const NormalizedDescriptor& b);

// Throws std::invalid_argument when either set is empty.
DistanceTable pairwise_distances(const DescriptorSet& a, const DescriptorSet& b);

// Every pair with distance strictly below t, many-to-many.
MatchSet matches_at_threshold(const DistanceTable& distances, double t);

}  // namespace mclamp
