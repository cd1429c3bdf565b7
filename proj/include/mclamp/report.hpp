#pragma once

// Benchmark report tables: per-pair AP rows, per-category and overall mAP,
// and the relative improvement of meaningful clamping over Lowe clamping.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mclamp/evaluation.hpp"


namespace mclamp {

inline constexpr const char* kAllImages = "All images";

struct PairRow {
  std::string category;
  int pair = 2;  // image index k of the pair (1, k)
  std::string policy;
  double ap = 0.0;
  std::size_t correspondences = 0;
  std::size_t correct = 0;  // at the largest swept threshold
  std::size_t false_matches = 0;
};

struct BenchReport {
  std::vector<std::string> policies;  // column order
  std::vector<PairRow> rows;
  std::vector<std::string> skipped;

  // Sorts rows by (category, pair, policy column).
  void sort_rows();

  // category -> policy -> mAP, plus an "All images" entry averaged over
  // every pair.
  std::map<std::string, std::map<std::string, double>> mean_aps() const;
  std::optional<double> overall(const std::string& policy) const;

  // 100 (mAP_mc - mAP_lowe) / mAP_lowe for every mc-* policy present, when
  // lowe was evaluated and its overall mAP is positive.
  std::map<std::string, double> improvements() const;
};

PairRow make_row(const std::string& category, int pair, const std::string& policy, const APResult& result);

std::optional<double> relative_improvement(double map_mc, double map_lowe);

std::string pairs_csv(const BenchReport& report);
std::string summary_csv(const BenchReport& report);
nlohmann::json to_json(const BenchReport& report);

// Recall against 1 - precision for each policy on one image pair.
struct NamedCurve {
  std::string policy;
  PRCurve curve;
};
std::string pr_curve_svg(const std::string& title, const std::vector<NamedCurve>& curves);

// Fixed-precision formatting shared by every table.
std::string format_fixed(double v, int digits = 6);

}  // namespace mclamp
