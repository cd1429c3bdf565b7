#pragma once

// Gradient-orientation histograms over normalized patches, and the clamping
// policies applied to them before matching.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mclamp/acontrario.hpp"
#include "mclamp/grid.hpp"

namespace mclamp {

// Square patch of intensities, row-major. Intensities are on the 8-bit
// gray scale (0..255) so that gradient magnitudes carry sample mass.
struct Patch {
  int side = 0;
  std::vector<double> intensities;

  Patch() = default;
  Patch(int side, std::vector<double> values);

  double at(int col, int row) const { return intensities[static_cast<std::size_t>(row) * side + col]; }
  double& at(int col, int row) { return intensities[static_cast<std::size_t>(row) * side + col]; }
};

struct GradientField {
  int side = 0;
  std::vector<double> magnitude;
  std::vector<double> orientation;  // radians in [0, 2 pi)
};

struct RawDescriptor {
  std::vector<double> bins;
  double mass = 0.0;
  double bin_probability = 0.0;
};

// Unit-length bins, or all zeros for a structureless patch. The all-zero
// sentinel never matches anything.
struct NormalizedDescriptor {
  std::vector<double> bins;

  bool is_sentinel() const;
};

struct ClampPolicy {
  enum class Kind { kNone, kLowe, kMeaningfulExact, kMeaningfulApprox };

  Kind kind = Kind::kNone;
  double c = 0.2;  // Lowe cap, used by kLowe only

  static ClampPolicy none() { return {Kind::kNone, 0.2}; }
  static ClampPolicy lowe(double c = 0.2);
  static ClampPolicy meaningful_exact() { return {Kind::kMeaningfulExact, 0.2}; }
  static ClampPolicy meaningful_approx() { return {Kind::kMeaningfulApprox, 0.2}; }

  // Accepts none | lowe | mc-exact | mc-approx.
  static ClampPolicy parse(const std::string& name, double lowe_c = 0.2);
  std::string name() const;

  friend bool operator==(const ClampPolicy&, const ClampPolicy&) = default;
};

// Tent weight of a spatial offset z for an axis with n_z bins.
double spatial_weight(double z, int n_z, double lambda_patch);

// Tent weight of orientation theta for the angular bin centered at theta_k,
// measured with circular distance.
double angular_weight(double theta, double theta_k, int n_theta);

GradientField gradient_field(const Patch& patch);

RawDescriptor build_descriptor(const Patch& patch, const HistogramGrid& grid);

NormalizedDescriptor normalize(std::span<const double> bins);
inline NormalizedDescriptor normalize(const RawDescriptor& raw) { return normalize(raw.bins); }

// Bins after the per-bin cap, before the final renormalization. For Lowe
// the bins are already unit-normalized and the cap is c; for the
// meaningful policies the bins are raw masses and the cap is the threshold.
struct ClampedBins {
  std::vector<double> bins;
  std::optional<double> cap;  // unset for kNone and for zero-mass input
  bool saturated = false;     // exact threshold hit ceil(M)
};

ClampedBins clamp_bins(const RawDescriptor& raw, const ClampPolicy& policy,
                       const AContrarioConfig& cfg, const HistogramGrid& grid);

NormalizedDescriptor clamp(const RawDescriptor& raw, const ClampPolicy& policy,
                           const AContrarioConfig& cfg, const HistogramGrid& grid);

}  // namespace mclamp
