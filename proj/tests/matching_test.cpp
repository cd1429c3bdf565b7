#include "mclamp/matching.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace mclamp {
namespace {

NormalizedDescriptor unit(std::size_t n, std::size_t axis) {
  NormalizedDescriptor d;
  d.bins.assign(n, 0.0);
  d.bins[axis] = 1.0;
  return d;
}

DescriptorSet set_of(std::vector<NormalizedDescriptor> ds) {
  DescriptorSet s;
  s.descriptors = std::move(ds);
  s.frames.resize(s.descriptors.size(), FeatureFrame{});
  return s;
}

DescriptorSet random_set(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<NormalizedDescriptor> ds;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(16);
    for (double& x : v) x = u(rng);
    ds.push_back(normalize(v));
  }
  return set_of(std::move(ds));
}

TEST(PairwiseDistances, Examples) {
  const auto a = set_of({unit(4, 0), unit(4, 1)});
  const auto b = set_of({unit(4, 0)});
  const auto t = pairwise_distances(a, b);
  ASSERT_EQ(t.rows(), 2u);
  ASSERT_EQ(t.cols(), 1u);
  EXPECT_EQ(t(0, 0), 0.0);
  EXPECT_NEAR(t(1, 0), 1.41421, 1e-5);
}

TEST(PairwiseDistances, SentinelIsInfinitelyFar) {
  NormalizedDescriptor zero;
  zero.bins.assign(4, 0.0);
  const auto t = pairwise_distances(set_of({zero, unit(4, 2)}), set_of({zero, unit(4, 2)}));
  EXPECT_TRUE(std::isinf(t(0, 0)));
  EXPECT_TRUE(std::isinf(t(0, 1)));
  EXPECT_TRUE(std::isinf(t(1, 0)));
  EXPECT_EQ(t(1, 1), 0.0);
}

TEST(PairwiseDistances, EmptySetThrows) {
  EXPECT_THROW(pairwise_distances(DescriptorSet{}, set_of({unit(4, 0)})), std::invalid_argument);
  EXPECT_THROW(pairwise_distances(set_of({unit(4, 0)}), DescriptorSet{}), std::invalid_argument);
}

TEST(MatchesAtThreshold, Examples) {
  const auto t = pairwise_distances(set_of({unit(4, 0), unit(4, 1)}), set_of({unit(4, 0)}));
  EXPECT_TRUE(matches_at_threshold(t, 1e-9).pairs.size() == 1);  // the zero-distance pair only
  EXPECT_TRUE(matches_at_threshold(t, 1.0).pairs == (std::vector<Match>{{0, 0, 0.0}}));
  const auto both = matches_at_threshold(t, 1.5);
  ASSERT_EQ(both.pairs.size(), 2u);
  EXPECT_EQ(both.pairs[1].index_a, 1u);
  EXPECT_EQ(matches_at_threshold(t, 2.01).pairs.size(), 2u);
  EXPECT_THROW(matches_at_threshold(t, 0.0), std::invalid_argument);
}

TEST(MatchesAtThreshold, StrictInequality) {
  DistanceTable t(1, 1);
  t(0, 0) = 0.5;
  EXPECT_TRUE(matches_at_threshold(t, 0.5).pairs.empty());
  EXPECT_EQ(matches_at_threshold(t, 0.5000001).pairs.size(), 1u);
}

TEST(MatchesAtThreshold, BelowMinimumIsEmpty) {
  std::mt19937_64 rng(3);
  const auto t = pairwise_distances(random_set(rng, 5), random_set(rng, 6));
  const double lo = *std::min_element(t.values().begin(), t.values().end());
  EXPECT_TRUE(matches_at_threshold(t, lo).pairs.empty());
}

TEST(MatchesProperties, MonotoneInThreshold) {
  std::mt19937_64 rng(4);
  const auto t = pairwise_distances(random_set(rng, 20), random_set(rng, 25));
  std::uniform_real_distribution<double> u(0.01, 1.5);
  for (int trial = 0; trial < 50; ++trial) {
    double t1 = u(rng), t2 = u(rng);
    if (t1 > t2) std::swap(t1, t2);
    const auto m1 = matches_at_threshold(t, t1);
    const auto m2 = matches_at_threshold(t, t2);
    EXPECT_TRUE(std::includes(m2.pairs.begin(), m2.pairs.end(), m1.pairs.begin(), m1.pairs.end(),
                              [](const Match& x, const Match& y) {
                                return std::tie(x.index_a, x.index_b) < std::tie(y.index_a, y.index_b);
                              }));
  }
}

TEST(MatchesProperties, SwapTransposes) {
  std::mt19937_64 rng(5);
  const auto a = random_set(rng, 12), b = random_set(rng, 9);
  const auto ab = matches_at_threshold(pairwise_distances(a, b), 0.6);
  const auto ba = matches_at_threshold(pairwise_distances(b, a), 0.6);
  ASSERT_EQ(ab.pairs.size(), ba.pairs.size());
  std::vector<Match> flipped;
  for (const auto& m : ba.pairs) flipped.push_back({m.index_b, m.index_a, m.distance});
  std::sort(flipped.begin(), flipped.end(), [](const Match& x, const Match& y) {
    return std::tie(x.index_a, x.index_b) < std::tie(y.index_a, y.index_b);
  });
  EXPECT_EQ(flipped, ab.pairs);
}

}  // namespace
}  // namespace mclamp
