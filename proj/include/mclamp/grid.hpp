#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mclamp {

// Bin lattice of the orientation histogram: n_x * n_y spatial cells times
// n_theta angular cells, laid over a square patch of radius lambda_patch.
// The angular axis wraps around; the spatial axes do not.
struct HistogramGrid {
  int n_x = 4;
  int n_y = 4;
  int n_theta = 8;
  double lambda_patch = 12.0;  // patch radius in pixels, side = 2 * lambda
  double sigma = 12.0;         // Gaussian window scale in pixels

  std::size_t bin_count() const {
    return static_cast<std::size_t>(n_x) * static_cast<std::size_t>(n_y) *
           static_cast<std::size_t>(n_theta);
  }

  double bin_probability() const { return 1.0 / static_cast<double>(bin_count()); }

  int patch_side() const { return static_cast<int>(2.0 * lambda_patch + 0.5); }

  // Bins are laid out with the angle varying fastest, then x, then y.
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(j) * n_x + i) * n_theta + k;
  }

  // Spatial bin centers split [-lambda, lambda] into n equal cells.
  double x_center(int i) const { return -lambda_patch + (i + 0.5) * (2.0 * lambda_patch / n_x); }
  double y_center(int j) const { return -lambda_patch + (j + 0.5) * (2.0 * lambda_patch / n_y); }
  double theta_center(int k) const;

  void validate() const {
    if (n_x < 1 || n_y < 1 || n_theta < 1)
      throw std::invalid_argument("histogram grid dimensions must be >= 1");
    if (!(lambda_patch > 0.0) || !(sigma > 0.0))
      throw std::invalid_argument("patch radius and window sigma must be positive");
    if (patch_side() < 3) throw std::invalid_argument("patch side must be at least 3 pixels");
  }

  // Parses "NXxNYxNT", e.g. "4x4x8". Patch geometry keeps its defaults.
  static HistogramGrid parse(const std::string& text);
  std::string to_string() const;
};

}  // namespace mclamp
