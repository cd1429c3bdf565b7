#include "mclamp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mclamp {

bool FeatureFrame::valid() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(orientation) && std::isfinite(scale) &&
         scale > 0.0;
}

std::optional<Mat2> Mat2::inverse() const {
  const double det_v = det();
  if (!(std::fabs(det_v) > 1e-12)) return std::nullopt;
  return Mat2{d / det_v, -b / det_v, -c / det_v, a / det_v};
}

Homography::Homography(const std::array<double, 9>& m) : m_(m) {
  for (double v : m_)
    if (!std::isfinite(v)) throw std::invalid_argument("homography entries must be finite");
  if (m_[8] != 0.0) {
    const double s = m_[8];
    for (double& v : m_) v /= s;
  }
  // Judge singularity on a scale-free copy.
  double max_abs = 0.0;
  for (double v : m_) max_abs = std::max(max_abs, std::fabs(v));
  if (max_abs == 0.0 || !(std::fabs(determinant()) / (max_abs * max_abs * max_abs) > 1e-12))
    throw std::invalid_argument("homography is singular");
}

Homography Homography::similarity(double scale, double angle, double tx, double ty) {
  const double c = scale * std::cos(angle);
  const double s = scale * std::sin(angle);
  return Homography({c, -s, tx, s, c, ty, 0, 0, 1});
}

double Homography::determinant() const {
  const auto& m = m_;
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Point2 Homography::apply(Point2 p) const {
  const auto& m = m_;
  const double w = m[6] * p.x + m[7] * p.y + m[8];
  if (w == 0.0 || !std::isfinite(w)) throw std::domain_error("point maps to infinity");
  return {(m[0] * p.x + m[1] * p.y + m[2]) / w, (m[3] * p.x + m[4] * p.y + m[5]) / w};
}

Homography Homography::inverse() const {
  const auto& m = m_;
  const double det = determinant();
  std::array<double, 9> inv{
      (m[4] * m[8] - m[5] * m[7]) / det, (m[2] * m[7] - m[1] * m[8]) / det, (m[1] * m[5] - m[2] * m[4]) / det,
      (m[5] * m[6] - m[3] * m[8]) / det, (m[0] * m[8] - m[2] * m[6]) / det, (m[2] * m[3] - m[0] * m[5]) / det,
      (m[3] * m[7] - m[4] * m[6]) / det, (m[1] * m[6] - m[0] * m[7]) / det, (m[0] * m[4] - m[1] * m[3]) / det};
  return Homography(inv);
}

Homography Homography::compose(const Homography& first) const {
  std::array<double, 9> out{};
  const auto& a = m_;
  const auto& b = first.m_;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      for (int k = 0; k < 3; ++k) out[r * 3 + c] += a[r * 3 + k] * b[k * 3 + c];
  return Homography(out);
}

Mat2 Homography::jacobian(Point2 p) const {
  const auto& m = m_;
  const double w = m[6] * p.x + m[7] * p.y + m[8];
  if (w == 0.0) throw std::domain_error("point maps to infinity");
  const double u = (m[0] * p.x + m[1] * p.y + m[2]) / w;
  const double v = (m[3] * p.x + m[4] * p.y + m[5]) / w;
  return Mat2{(m[0] - u * m[6]) / w, (m[1] - u * m[7]) / w, (m[3] - v * m[6]) / w, (m[4] - v * m[7]) / w};
}

FeatureFrame Homography::map_frame(const FeatureFrame& f) const {
  const Point2 center = apply({f.x, f.y});
  const Mat2 j = jacobian({f.x, f.y});
  const Point2 axis = j.apply({std::cos(f.orientation), std::sin(f.orientation)});
  return FeatureFrame{center.x, center.y, f.scale * std::sqrt(std::fabs(j.det())), std::atan2(axis.y, axis.x)};
}

}  // namespace mclamp
