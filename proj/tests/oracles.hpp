#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library's numerical paths.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

namespace mclamp::oracle {

// log pmf of Binomial(n, p) at j, in long double.
inline long double log_pmf(std::int64_t n, std::int64_t j, long double p) {
  return std::lgamma(static_cast<long double>(n) + 1) - std::lgamma(static_cast<long double>(j) + 1) -
         std::lgamma(static_cast<long double>(n - j) + 1) + j * std::log(p) + (n - j) * std::log1p(-p);
}

inline long double log_sum_exp(const std::vector<long double>& terms) {
  long double hi = -std::numeric_limits<long double>::infinity();
  for (auto t : terms) hi = std::max(hi, t);
  if (hi == -std::numeric_limits<long double>::infinity()) return hi;
  long double s = 0;
  for (auto t : terms) s += std::exp(t - hi);
  return hi + std::log(s);
}

// log P[X >= k] by direct summation of the pmf.
inline long double log_upper_tail(std::int64_t n, std::int64_t k, long double p) {
  std::vector<long double> terms;
  for (std::int64_t j = k; j <= n; ++j) terms.push_back(log_pmf(n, j, p));
  return log_sum_exp(terms);
}

// Smallest k with tests * P[X >= k] < eps, scanning every k. Both tails are
// summed so the decision is made on the one that does not round to 1.
inline std::int64_t exact_threshold(std::int64_t n, long double p, long double tests, long double eps = 1) {
  std::vector<long double> lp(static_cast<std::size_t>(n) + 1);
  for (std::int64_t j = 0; j <= n; ++j) lp[j] = log_pmf(n, j, p);
  const long double bound = eps / tests;
  // suffix[k] = log P[X >= k], prefix[k] = log P[X < k]
  std::vector<long double> suffix(n + 2, -std::numeric_limits<long double>::infinity());
  std::vector<long double> prefix(n + 2, -std::numeric_limits<long double>::infinity());
  const auto add = [](long double a, long double b) {
    if (a == -std::numeric_limits<long double>::infinity()) return b;
    const long double hi = std::max(a, b);
    return hi + std::log(std::exp(a - hi) + std::exp(b - hi));
  };
  for (std::int64_t j = n; j >= 0; --j) suffix[j] = add(suffix[j + 1], lp[j]);
  for (std::int64_t j = 1; j <= n + 1; ++j) prefix[j] = add(prefix[j - 1], lp[j - 1]);
  for (std::int64_t k = 0; k <= n; ++k) {
    bool meaningful;
    if (bound > 1)
      meaningful = true;
    else if (bound <= 0.5L)
      meaningful = suffix[k] < std::log(bound);
    else
      meaningful = prefix[k] > std::log1p(-bound);
    if (meaningful) return k;
  }
  return n;
}

// Descriptor by looping every bin for every pixel: no support shortcuts.
// Gradients by the same finite-difference scheme, written out directly.
inline std::vector<double> brute_force_histogram(const std::vector<double>& patch, int side, int nx, int ny, int nt,
                                                 double lambda, double sigma) {
  const auto J = [&](int c, int r) { return patch[static_cast<std::size_t>(r) * side + c]; };
  std::vector<double> bins(static_cast<std::size_t>(nx) * ny * nt, 0.0);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      double gx, gy;
      if (c == 0) gx = J(1, r) - J(0, r);
      else if (c == side - 1) gx = J(side - 1, r) - J(side - 2, r);
      else gx = (J(c + 1, r) - J(c - 1, r)) / 2.0;
      if (r == 0) gy = J(c, 1) - J(c, 0);
      else if (r == side - 1) gy = J(c, side - 1) - J(c, side - 2);
      else gy = (J(c, r + 1) - J(c, r - 1)) / 2.0;
      const double mag = std::sqrt(gx * gx + gy * gy);
      if (mag == 0) continue;
      double theta = std::atan2(gy, gx);
      if (theta < 0) theta += 2 * std::numbers::pi;
      const double x = c + 0.5 - side / 2.0, y = r + 0.5 - side / 2.0;
      const double g = std::exp(-(x * x + y * y) / (2 * sigma * sigma));
      for (int j = 0; j < ny; ++j) {
        const double yc = -lambda + (j + 0.5) * 2 * lambda / ny;
        const double wy = std::max(0.0, 1 - ny / (2 * lambda) * std::fabs(y - yc));
        for (int i = 0; i < nx; ++i) {
          const double xc = -lambda + (i + 0.5) * 2 * lambda / nx;
          const double wx = std::max(0.0, 1 - nx / (2 * lambda) * std::fabs(x - xc));
          for (int k = 0; k < nt; ++k) {
            const double tk = 2 * std::numbers::pi * k / nt;
            double d = std::fabs(theta - tk);
            d = std::min(d, 2 * std::numbers::pi - d);
            const double wt = std::max(0.0, 1 - nt / (2 * std::numbers::pi) * d);
            bins[(static_cast<std::size_t>(j) * nx + i) * nt + k] += g * wt * wx * wy * mag;
          }
        }
      }
    }
  }
  return bins;
}

}  // namespace mclamp::oracle
