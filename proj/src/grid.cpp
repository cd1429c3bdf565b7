#include "mclamp/grid.hpp"

#include <numbers>
#include <sstream>

namespace mclamp {

double HistogramGrid::theta_center(int k) const {
  return 2.0 * std::numbers::pi * k / n_theta;
}

HistogramGrid HistogramGrid::parse(const std::string& text) {
  HistogramGrid grid;
  std::istringstream in(text);
  char sep1 = 0, sep2 = 0;
  if (!(in >> grid.n_x >> sep1 >> grid.n_y >> sep2 >> grid.n_theta) || sep1 != 'x' || sep2 != 'x')
    throw std::invalid_argument("grid must look like 4x4x8, got '" + text + "'");
  std::string rest;
  if (in >> rest) throw std::invalid_argument("trailing characters in grid '" + text + "'");
  grid.validate();
  return grid;
}

std::string HistogramGrid::to_string() const {
  return std::to_string(n_x) + "x" + std::to_string(n_y) + "x" + std::to_string(n_theta);
}

}  // namespace mclamp
