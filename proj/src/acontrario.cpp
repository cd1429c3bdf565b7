#include "mclamp/acontrario.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace mclamp {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTieTolerance = 1e-12;

// std::lgamma writes the global signgam on glibc; the reentrant variant
// keeps these functions safe to call concurrently.
double log_gamma(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

// log(1 - exp(v)) for v <= 0.
double log1m_exp(double v) {
  if (v == kNegInf) return 0.0;
  if (v > -0.6931471805599453) return std::log(-std::expm1(v));
  return std::log1p(-std::exp(v));
}

// Continued fraction for the incomplete beta function (modified Lentz).
// Converges quickly for x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 200000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("incomplete beta continued fraction did not converge (a=" +
                           std::to_string(a) + ", b=" + std::to_string(b) + ")");
}

// {log I_x(a, b), log(1 - I_x(a, b))} for a, b > 0 and 0 < x < 1.
std::pair<double, double> log_incomplete_beta(double a, double b, double x) {
  const double log_beta = log_gamma(a) + log_gamma(b) - log_gamma(a + b);
  const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    const double log_i = log_front + std::log(beta_continued_fraction(a, b, x)) - std::log(a);
    return {std::min(log_i, 0.0), log1m_exp(std::min(log_i, 0.0))};
  }
  const double log_j = log_front + std::log(beta_continued_fraction(b, a, 1.0 - x)) - std::log(b);
  return {log1m_exp(std::min(log_j, 0.0)), std::min(log_j, 0.0)};
}

// {log P[X >= k], log P[X < k]}.
std::pair<double, double> log_tails(const TailQuery& q) {
  q.validate();
  if (q.k == 0.0) return {0.0, kNegInf};
  // P[X >= k] = I_p(k, M - k + 1).
  return log_incomplete_beta(q.k, q.mass - q.k + 1.0, q.p);
}

void require_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("bin probability must lie in (0, 1)");
}

}  // namespace

void AContrarioConfig::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw std::domain_error("epsilon must be a positive finite number");
  if (explicit_tests && !(*explicit_tests >= 1.0 && std::isfinite(*explicit_tests)))
    throw std::domain_error("explicit number of tests must be >= 1");
}

double test_count(const AContrarioConfig& cfg, const HistogramGrid& grid) {
  cfg.validate();
  return cfg.explicit_tests ? *cfg.explicit_tests : n_rect(grid);
}

void TailQuery::validate() const {
  require_probability(p);
  if (!std::isfinite(mass) || !std::isfinite(k)) throw std::domain_error("tail query must be finite");
  if (mass < 0.0 || k < 0.0) throw std::domain_error("tail query mass and k must be nonnegative");
  if (k > mass) throw std::domain_error("tail query k exceeds the total mass");
}

double binomial_tail(const TailQuery& q) { return std::exp(log_tails(q).first); }

double log_binomial_tail(const TailQuery& q) { return log_tails(q).first; }

double log_binomial_lower_tail(const TailQuery& q) { return log_tails(q).second; }

double nfa(const AContrarioConfig& cfg, double tests, const TailQuery& q) {
  cfg.validate();
  if (!(tests >= 1.0)) throw std::domain_error("number of tests must be >= 1");
  return tests * binomial_tail(q);
}

bool is_meaningful(const AContrarioConfig& cfg, double tests, const TailQuery& q) {
  cfg.validate();
  if (!(tests > 0.0)) throw std::domain_error("number of tests must be positive");
  // Meaningful iff P[X >= k] < bound.
  const double bound = cfg.epsilon / tests;
  const auto [log_upper, log_lower] = log_tails(q);
  if (bound > 1.0) return true;
  if (bound <= 0.5) return log_upper < std::log(bound) - kTieTolerance;
  // Equivalent lower-tail form: P[X < k] > 1 - bound.
  return log_lower > std::log1p(-bound) + kTieTolerance;
}

double n_rect(int n_x, int n_y, int n_theta) {
  if (n_x < 1 || n_y < 1 || n_theta < 1) throw std::invalid_argument("grid dimensions must be >= 1");
  // Each n (n + 1) is even, so the product is a multiple of 8.
  const auto axis = [](int n) { return static_cast<std::uint64_t>(n) * (static_cast<std::uint64_t>(n) + 1); };
  return static_cast<double>(axis(n_x) * axis(n_y) * axis(n_theta) / 8);
}

double n_rect(const HistogramGrid& grid) { return n_rect(grid.n_x, grid.n_y, grid.n_theta); }

ExactThreshold exact_threshold(const AContrarioConfig& cfg, double tests, double mass, double p) {
  require_probability(p);
  if (!std::isfinite(mass) || mass < 0.0) throw std::domain_error("mass must be finite and nonnegative");
  const auto meaningful = [&](std::int64_t k) {
    return is_meaningful(cfg, tests, TailQuery{mass, static_cast<double>(k), p});
  };
  const auto k_max = static_cast<std::int64_t>(std::floor(mass));
  if (!meaningful(k_max)) return {static_cast<std::int64_t>(std::ceil(mass)), true};
  if (meaningful(0)) return {0, false};
  // The tail is non-increasing in k: lo is never meaningful, hi always is.
  std::int64_t lo = 0;
  std::int64_t hi = k_max;
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (meaningful(mid))
      hi = mid;
    else
      lo = mid;
  }
  return {hi, false};
}

double approx_alpha(double tests) {
  if (!(tests >= 1.0) || !std::isfinite(tests)) throw std::domain_error("number of tests must be >= 1");
  return std::sqrt(std::log(tests));
}

double approx_threshold(double tests, double mass, double p) {
  // A single bin (p = 1) is fine here: the deviation term vanishes.
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("bin probability must lie in (0, 1]");
  if (!std::isfinite(mass) || mass < 0.0) throw std::domain_error("mass must be finite and nonnegative");
  const double mean = mass * p;
  return mean + approx_alpha(tests) * std::sqrt(mean * (1.0 - p));
}

bool slud_conditions_hold(double p, double r) {
  return (p <= 0.25 && p <= r) || (p <= r && r <= 1.0 - p);
}

}  // namespace mclamp
