#include "mclamp/acontrario.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "oracles.hpp"

namespace mclamp {
namespace {

TEST(BinomialTail, FromZeroCoversEverything) {
  EXPECT_DOUBLE_EQ(binomial_tail({10, 0, 0.1}), 1.0);
}

TEST(BinomialTail, SmallIntegerCases) {
  // (6 + 4 + 1) / 16
  EXPECT_NEAR(binomial_tail({4, 2, 0.5}), 0.6875, 1e-14);
  // 2^-10
  EXPECT_NEAR(binomial_tail({10, 10, 0.5}), 9.765625e-4, 1e-17);
}

TEST(BinomialTail, RejectsBadQueries) {
  EXPECT_THROW(binomial_tail({10, 11, 0.5}), std::domain_error);
  EXPECT_THROW(binomial_tail({10, 2, 0.0}), std::domain_error);
  EXPECT_THROW(binomial_tail({10, 2, 1.0}), std::domain_error);
  EXPECT_THROW(binomial_tail({-1, 0, 0.5}), std::domain_error);
  EXPECT_THROW(binomial_tail({5, -1, 0.5}), std::domain_error);
}

TEST(BinomialTail, MatchesDirectSummation) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> mass(1, 2000);
  const double ps[] = {1.0 / 8, 1.0 / 64, 1.0 / 128, 1.0 / 256, 0.3, 0.5};
  for (int trial = 0; trial < 300; ++trial) {
    const int m = mass(rng);
    const int k = std::uniform_int_distribution<int>(0, m)(rng);
    const double p = ps[trial % 6];
    const double got = log_binomial_tail({double(m), double(k), p});
    const long double want = oracle::log_upper_tail(m, k, p);
    ASSERT_LE(std::fabs(std::expm1(got - static_cast<double>(want))), 1e-10) << m << " " << k << " " << p;
  }
}

TEST(BinomialTail, LowerTailComplementsUpper) {
  for (double k : {1.0, 5.0, 40.0, 99.0}) {
    const TailQuery q{100, k, 1.0 / 8};
    EXPECT_NEAR(std::exp(log_binomial_tail(q)) + std::exp(log_binomial_lower_tail(q)), 1.0, 1e-13);
  }
  EXPECT_EQ(log_binomial_lower_tail({100, 0, 0.5}), -std::numeric_limits<double>::infinity());
}

TEST(BinomialTail, DeepTailStaysFiniteInLogDomain) {
  // p^M = 256^-10000 underflows as a value but not as a log.
  const double lt = log_binomial_tail({10000, 10000, 1.0 / 256});
  EXPECT_NEAR(lt, 10000 * std::log(1.0 / 256), 1e-6);
}

TEST(BinomialTail, ContinuousExtensionIsMonotone) {
  double prev = 1.0;
  for (double k = 0; k <= 37.5; k += 0.25) {
    const double t = binomial_tail({37.5, k, 0.2});
    EXPECT_LE(t, prev + 1e-15);
    prev = t;
  }
}

TEST(BinomialTail, MonotoneInKAndP) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const double m = std::uniform_real_distribution<double>(1, 3000)(rng);
    const double k1 = std::uniform_real_distribution<double>(0, m)(rng);
    const double k2 = std::uniform_real_distribution<double>(k1, m)(rng);
    const double p1 = std::uniform_real_distribution<double>(0.001, 0.9)(rng);
    const double p2 = std::uniform_real_distribution<double>(p1, 0.95)(rng);
    EXPECT_GE(log_binomial_tail({m, k1, p1}), log_binomial_tail({m, k2, p1}) - 1e-12);
    EXPECT_LE(log_binomial_tail({m, k1, p1}), log_binomial_tail({m, k1, p2}) + 1e-12);
  }
}

TEST(Nfa, ScalesTheTail) {
  const AContrarioConfig cfg;
  EXPECT_NEAR(nfa(cfg, 1, {4, 2, 0.5}), 0.6875, 1e-14);
  EXPECT_NEAR(nfa(cfg, 16, {4, 2, 0.5}), 11.0, 1e-12);
  EXPECT_NEAR(nfa(cfg, 3600, {10, 0, 0.1}), 3600.0, 1e-9);
  EXPECT_THROW(nfa(cfg, 0.5, {4, 2, 0.5}), std::domain_error);
}

TEST(NRect, CountsRectangularBoxes) {
  EXPECT_EQ(n_rect(1, 1, 1), 1.0);
  EXPECT_EQ(n_rect(2, 2, 2), 27.0);
  EXPECT_EQ(n_rect(4, 4, 8), 3600.0);
  EXPECT_EQ(n_rect(HistogramGrid{}), 3600.0);
  EXPECT_THROW(n_rect(0, 4, 8), std::invalid_argument);
}

TEST(NRect, IsIntegralAndMatchesEnumeration) {
  for (int nx = 1; nx <= 5; ++nx)
    for (int ny = 1; ny <= 5; ++ny)
      for (int nt = 1; nt <= 9; ++nt) {
        // Intervals per axis: n (n + 1) / 2.
        double boxes = 0;
        for (int a = 0; a < nx; ++a)
          for (int b = a; b < nx; ++b)
            for (int c = 0; c < ny; ++c)
              for (int d = c; d < ny; ++d)
                for (int e = 0; e < nt; ++e)
                  for (int f = e; f < nt; ++f) boxes += 1;
        const double v = n_rect(nx, ny, nt);
        EXPECT_EQ(v, std::floor(v));
        EXPECT_EQ(v, boxes);
      }
}

TEST(ExactThreshold, TinyEnumeratedCases) {
  const AContrarioConfig cfg;
  // tail(3, 1, 1/2) = 7/8 < 1
  EXPECT_EQ(exact_threshold(cfg, 1, 3, 0.5).value, 1);
  // 2 * tail(3, 2, 1/2) = 1 is not < 1; 2 * 1/8 is.
  EXPECT_EQ(exact_threshold(cfg, 2, 3, 0.5).value, 3);
}

TEST(ExactThreshold, BruteForceAndApproxOrdering) {
  const AContrarioConfig cfg;
  const auto t = exact_threshold(cfg, 27, 100, 1.0 / 8);
  EXPECT_EQ(t.value, oracle::exact_threshold(100, 1.0L / 8, 27));
  EXPECT_EQ(t.value, 20);
  EXPECT_GE(static_cast<double>(t.value), approx_threshold(27, 100, 1.0 / 8));
  EXPECT_FALSE(t.saturated);
}

TEST(ExactThreshold, SatisfiesDefinition) {
  const AContrarioConfig cfg;
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const double m = std::uniform_int_distribution<int>(1, 3000)(rng);
    const double p = 1.0 / std::vector<int>{8, 64, 128, 256}[trial % 4];
    const double tests = std::vector<double>{1, 27, 3600}[trial % 3];
    const auto t = exact_threshold(cfg, tests, m, p);
    if (t.saturated) {
      EXPECT_FALSE(is_meaningful(cfg, tests, {m, m, p}));
      continue;
    }
    EXPECT_TRUE(is_meaningful(cfg, tests, {m, double(t.value), p}));
    // With a single test the tail near k = 1 rounds to 1.0 as a value.
    if (t.value >= 1 && tests > 1) {
      const double prev_nfa = nfa(cfg, tests, {m, double(t.value - 1), p});
      EXPECT_GE(prev_nfa, cfg.epsilon * (1 - 1e-12));
      EXPECT_LT(nfa(cfg, tests, {m, double(t.value), p}), cfg.epsilon);
    }
  }
}

TEST(ExactThreshold, SaturatesForTinyMass) {
  const AContrarioConfig cfg;
  // Even k = M has tail p^M = 1/128 * 3600 > 1.
  const auto t = exact_threshold(cfg, 3600, 1.0, 1.0 / 128);
  EXPECT_TRUE(t.saturated);
  EXPECT_EQ(t.value, 1);
  const auto frac = exact_threshold(cfg, 3600, 1.5, 1.0 / 128);
  EXPECT_TRUE(frac.saturated);
  EXPECT_EQ(frac.value, 2);
}

TEST(ExactThreshold, NonIntegerMass) {
  const AContrarioConfig cfg;
  const auto t = exact_threshold(cfg, 3600, 1234.56, 1.0 / 128);
  EXPECT_FALSE(t.saturated);
  EXPECT_TRUE(is_meaningful(cfg, 3600, {1234.56, double(t.value), 1.0 / 128}));
  EXPECT_FALSE(is_meaningful(cfg, 3600, {1234.56, double(t.value - 1), 1.0 / 128}));
}

TEST(ExactThreshold, SingleTestMeansAnyPositiveCount) {
  // With one test and epsilon 1, tail < 1 exactly when k >= 1, even when
  // the tail rounds to 1.0 in double.
  const AContrarioConfig cfg;
  EXPECT_EQ(exact_threshold(cfg, 1, 5000, 1.0 / 8).value, 1);
}

TEST(ExactThreshold, EpsilonIsConfigurable) {
  AContrarioConfig loose;
  loose.epsilon = 100;
  AContrarioConfig strict;
  strict.epsilon = 0.01;
  const auto a = exact_threshold(loose, 3600, 2000, 1.0 / 128).value;
  const auto b = exact_threshold(AContrarioConfig{}, 3600, 2000, 1.0 / 128).value;
  const auto c = exact_threshold(strict, 3600, 2000, 1.0 / 128).value;
  EXPECT_LT(a, b);
  EXPECT_LT(b, c);
  AContrarioConfig huge;
  huge.epsilon = 1e6;
  EXPECT_EQ(exact_threshold(huge, 3600, 2000, 1.0 / 128).value, 0);
}

TEST(ApproxThreshold, Examples) {
  EXPECT_DOUBLE_EQ(approx_threshold(1, 1000, 1.0 / 128), 7.8125);
  EXPECT_NEAR(approx_threshold(3600, 1000, 1.0 / 128), 15.7799, 1e-3);
  EXPECT_NEAR(approx_threshold(27, 100, 1.0 / 8), 12.5 + std::sqrt(std::log(27.0)) * std::sqrt(10.9375), 1e-12);
  EXPECT_NEAR(approx_threshold(27, 100, 1.0 / 8), 18.504, 1e-3);
  EXPECT_THROW(approx_threshold(0.5, 100, 0.1), std::domain_error);
  EXPECT_DOUBLE_EQ(approx_threshold(1, 40, 1.0), 40.0);
  EXPECT_THROW(approx_threshold(1, 40, 1.5), std::domain_error);
}

TEST(Slud, Conditions) {
  EXPECT_TRUE(slud_conditions_hold(1.0 / 128, 0.1));
  EXPECT_TRUE(slud_conditions_hold(0.3, 0.5));
  EXPECT_FALSE(slud_conditions_hold(0.3, 0.1));
  EXPECT_FALSE(slud_conditions_hold(0.3, 0.8));
}

// Approximate threshold never exceeds the exact one once the number of
// tests is above one. With a single test, alpha = 0 while the exact
// threshold collapses to 1, so the ordering cannot hold there.
TEST(ApproxThreshold, BelowExactForMultipleTests) {
  const AContrarioConfig cfg;
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const double m = std::uniform_int_distribution<int>(100, 10000)(rng);
    const double p = 1.0 / std::vector<int>{8, 64, 128, 256}[trial % 4];
    const double tests = trial % 2 ? 27.0 : 3600.0;
    const double approx = approx_threshold(tests, m, p);
    if (!slud_conditions_hold(p, approx / m)) continue;
    ++checked;
    EXPECT_LE(approx, static_cast<double>(exact_threshold(cfg, tests, m, p).value)) << m << " " << p << " " << tests;
  }
  EXPECT_GT(checked, 300);
}

TEST(ApproxThreshold, SingleTestCounterexample) {
  const AContrarioConfig cfg;
  EXPECT_EQ(exact_threshold(cfg, 1, 1000, 1.0 / 8).value, 1);
  EXPECT_DOUBLE_EQ(approx_threshold(1, 1000, 1.0 / 8), 125.0);
}

TEST(AContrarioConfig, Validation) {
  AContrarioConfig cfg;
  cfg.epsilon = 0;
  EXPECT_THROW(cfg.validate(), std::domain_error);
  cfg.epsilon = 1;
  cfg.explicit_tests = 0.5;
  EXPECT_THROW(cfg.validate(), std::domain_error);
  cfg.explicit_tests = 10;
  EXPECT_EQ(test_count(cfg, HistogramGrid{}), 10);
}

}  // namespace
}  // namespace mclamp
