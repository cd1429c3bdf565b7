#pragma once

// Binomial tails, numbers of false alarms, and the per-descriptor clamping
// thresholds derived from them. Every function here is pure.

#include <cstdint>
#include <optional>

#include "mclamp/grid.hpp"

namespace mclamp {

struct AContrarioConfig {
  double epsilon = 1.0;
  // When unset, the number of tests is the count of axis-aligned
  // rectangular sub-boxes of the grid (see n_rect).
  std::optional<double> explicit_tests;

  void validate() const;
};

// Number of tests for a grid under the configured mode.
double test_count(const AContrarioConfig& cfg, const HistogramGrid& grid);

// P[X >= k] for X ~ Binomial(M, p).
struct TailQuery {
  double mass = 0.0;  // M
  double k = 0.0;
  double p = 0.5;

  void validate() const;
};

// Upper tail P[X >= k]. For non-integer M or k the value is the regularized
// incomplete beta I_p(k, M - k + 1), which agrees with the pmf sum on integers.
double binomial_tail(const TailQuery& q);

// Natural logs of the upper tail P[X >= k] and lower tail P[X < k]. Both are
// accurate where the corresponding value is tiny; log_binomial_lower_tail is
// -infinity at k == 0.
double log_binomial_tail(const TailQuery& q);
double log_binomial_lower_tail(const TailQuery& q);

// tests * P[X >= k]. Throws std::domain_error if tests < 1.
double nfa(const AContrarioConfig& cfg, double tests, const TailQuery& q);

// True iff tests * P[X >= k] < epsilon. Near-exact ties (relative 1e-12)
// count as not meaningful. Decided on whichever tail is well conditioned, so
// the answer stays correct when the upper tail rounds to 1 in double.
bool is_meaningful(const AContrarioConfig& cfg, double tests, const TailQuery& q);

// (1/8) nx ny nt (nx+1)(ny+1)(nt+1): count of axis-aligned boxes in the grid.
double n_rect(int n_x, int n_y, int n_theta);
double n_rect(const HistogramGrid& grid);

struct ExactThreshold {
  std::int64_t value = 0;
  // Set when no k <= M is meaningful; value is then ceil(M) and clamping
  // with it changes nothing.
  bool saturated = false;
};

// Smallest integer k with tests * P[X >= k] < epsilon.
ExactThreshold exact_threshold(const AContrarioConfig& cfg, double tests, double mass, double p);

// M p + sqrt(ln tests) sqrt(M p (1 - p)).
double approx_threshold(double tests, double mass, double p);

// sqrt(ln tests), the multiplier of the standard deviation above.
double approx_alpha(double tests);

// Validity region of the large-deviation bound behind approx_threshold:
// (p <= 1/4 and p <= r) or (p <= r <= 1 - p).
bool slud_conditions_hold(double p, double r);

}  // namespace mclamp
