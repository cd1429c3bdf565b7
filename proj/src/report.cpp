#include "mclamp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace mclamp {
namespace {

std::size_t policy_rank(const std::vector<std::string>& policies, const std::string& name) {
  const auto it = std::find(policies.begin(), policies.end(), name);
  return static_cast<std::size_t>(it - policies.begin());
}

// Numbers in JSON are rounded to the same precision as the CSV tables.
double rounded(double v) { return std::round(v * 1e6) / 1e6; }

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  // Avoid "-0.000000".
  if (std::string(buf).find_first_not_of("-0.") == std::string::npos && buf[0] == '-') return buf + 1;
  return buf;
}

void BenchReport::sort_rows() {
  std::stable_sort(rows.begin(), rows.end(), [this](const PairRow& a, const PairRow& b) {
    if (a.category != b.category) return a.category < b.category;
    if (a.pair != b.pair) return a.pair < b.pair;
    return policy_rank(policies, a.policy) < policy_rank(policies, b.policy);
  });
}

std::map<std::string, std::map<std::string, double>> BenchReport::mean_aps() const {
  std::map<std::string, std::map<std::string, std::vector<double>>> groups;
  for (const auto& r : rows) {
    groups[r.category][r.policy].push_back(r.ap);
    groups[kAllImages][r.policy].push_back(r.ap);
  }
  std::map<std::string, std::map<std::string, double>> out;
  for (const auto& [category, by_policy] : groups)
    for (const auto& [policy, aps] : by_policy) out[category][policy] = mean_ap(aps);
  return out;
}

std::optional<double> BenchReport::overall(const std::string& policy) const {
  std::vector<double> aps;
  for (const auto& r : rows)
    if (r.policy == policy) aps.push_back(r.ap);
  if (aps.empty()) return std::nullopt;
  return mean_ap(aps);
}

std::map<std::string, double> BenchReport::improvements() const {
  std::map<std::string, double> out;
  const auto lowe = overall("lowe");
  if (!lowe) return out;
  for (const auto& policy : policies) {
    if (policy.rfind("mc-", 0) != 0) continue;
    const auto mc = overall(policy);
    if (!mc) continue;
    if (const auto imp = relative_improvement(*mc, *lowe)) out[policy] = *imp;
  }
  return out;
}

PairRow make_row(const std::string& category, int pair, const std::string& policy, const APResult& result) {
  PairRow row;
  row.category = category;
  row.pair = pair;
  row.policy = policy;
  row.ap = result.ap;
  row.correspondences = result.correspondences;
  if (!result.correct_matches.empty()) {
    row.correct = result.correct_matches.back();
    row.false_matches = result.false_matches.back();
  }
  return row;
}

std::optional<double> relative_improvement(double map_mc, double map_lowe) {
  if (!(map_lowe > 0.0)) return std::nullopt;
  return 100.0 * (map_mc - map_lowe) / map_lowe;
}

std::string pairs_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "category,pair,policy,ap,correspondences,correct,false\n";
  for (const auto& r : report.rows)
    out << r.category << ",1-" << r.pair << ',' << r.policy << ',' << format_fixed(r.ap) << ','
        << r.correspondences << ',' << r.correct << ',' << r.false_matches << '\n';
  return out.str();
}

std::string summary_csv(const BenchReport& report) {
  const auto maps = report.mean_aps();
  std::ostringstream out;
  out << "category";
  for (const auto& p : report.policies) out << ',' << p;
  out << '\n';
  const auto emit = [&](const std::string& category) {
    const auto it = maps.find(category);
    if (it == maps.end()) return;
    out << category;
    for (const auto& p : report.policies) {
      const auto v = it->second.find(p);
      out << ',' << (v == it->second.end() ? std::string() : format_fixed(v->second));
    }
    out << '\n';
  };
  for (const auto& [category, _] : maps)
    if (category != kAllImages) emit(category);
  emit(kAllImages);
  return out.str();
}

nlohmann::json to_json(const BenchReport& report) {
  nlohmann::json j;
  j["policies"] = report.policies;
  j["pairs"] = nlohmann::json::array();
  for (const auto& r : report.rows) {
    j["pairs"].push_back({{"category", r.category},
                          {"pair", "1-" + std::to_string(r.pair)},
                          {"policy", r.policy},
                          {"ap", rounded(r.ap)},
                          {"correspondences", r.correspondences},
                          {"correct", r.correct},
                          {"false", r.false_matches}});
  }
  nlohmann::json maps = nlohmann::json::object();
  for (const auto& [category, by_policy] : report.mean_aps())
    for (const auto& [policy, v] : by_policy) maps[category][policy] = rounded(v);
  j["mean_ap"] = maps;
  nlohmann::json imp = nlohmann::json::object();
  for (const auto& [policy, v] : report.improvements()) imp[policy] = rounded(v);
  j["improvement_over_lowe_percent"] = imp;
  j["skipped"] = report.skipped;
  return j;
}

std::string pr_curve_svg(const std::string& title, const std::vector<NamedCurve>& curves) {
  constexpr int kW = 420, kH = 360, kL = 50, kT = 30, kPlot = 280;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kL << "\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">" << title << "</text>\n";
  out << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kPlot << "\" height=\"" << kPlot
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double f = i / 4.0;
    const std::string label = format_fixed(f, 2);
    out << "<text x=\"" << format_fixed(kL + f * kPlot - 10, 1) << "\" y=\"" << kT + kPlot + 15
        << "\" font-family=\"sans-serif\" font-size=\"10\">" << label << "</text>\n";
    out << "<text x=\"" << kL - 30 << "\" y=\"" << format_fixed(kT + (1.0 - f) * kPlot + 4, 1)
        << "\" font-family=\"sans-serif\" font-size=\"10\">" << label << "</text>\n";
  }
  out << "<text x=\"" << kL + kPlot / 2 - 30 << "\" y=\"" << kT + kPlot + 30
      << "\" font-family=\"sans-serif\" font-size=\"11\">1-precision</text>\n";
  out << "<text x=\"12\" y=\"" << kT + kPlot / 2 << "\" font-family=\"sans-serif\" font-size=\"11\" "
      << "transform=\"rotate(-90 12 " << kT + kPlot / 2 << ")\">recall</text>\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* color = kPalette[c % std::size(kPalette)];
    std::string points;
    for (const auto& p : curves[c].curve.points) {
      if (p.matches() == 0) continue;
      points += format_fixed(kL + p.one_minus_precision * kPlot, 2) + "," +
                format_fixed(kT + (1.0 - p.recall) * kPlot, 2) + " ";
    }
    if (!points.empty()) points.pop_back();
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << points
        << "\"/>\n";
    out << "<text x=\"" << kL + kPlot + 8 << "\" y=\"" << kT + 14 + 16 * c << "\" fill=\"" << color
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << curves[c].policy << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace mclamp
