#pragma once

#include <array>
#include <optional>

namespace mclamp {

// Similarity frame of a detected feature. Coordinates are continuous image
// coordinates in which pixel (i, j) covers [i, i+1) x [j, j+1).
struct FeatureFrame {
  double x = 0.0;
  double y = 0.0;
  double scale = 1.0;        // region radius in pixels
  double orientation = 0.0;  // radians

  bool valid() const;
  friend bool operator==(const FeatureFrame&, const FeatureFrame&) = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Row-major 2x2 matrix.
struct Mat2 {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  double det() const { return a * d - b * c; }
  Point2 apply(Point2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  std::optional<Mat2> inverse() const;
};

// Projective map between two images, row-major 3x3.
class Homography {
 public:
  Homography() = default;
  // Normalizes so that m[8] == 1 when it is nonzero. Throws
  // std::invalid_argument on non-finite entries or a singular matrix.
  explicit Homography(const std::array<double, 9>& m);

  static Homography identity() { return Homography(); }
  static Homography similarity(double scale, double angle, double tx, double ty);

  const std::array<double, 9>& matrix() const { return m_; }
  double determinant() const;

  // Throws std::domain_error for points mapped to infinity.
  Point2 apply(Point2 p) const;
  Homography inverse() const;
  Homography compose(const Homography& first) const;  // this * first

  // Jacobian of the map at p.
  Mat2 jacobian(Point2 p) const;

  // Maps a frame through the local affine approximation at its center:
  // scale by sqrt(|det J|), orientation of J applied to the frame axis.
  FeatureFrame map_frame(const FeatureFrame& f) const;

 private:
  std::array<double, 9> m_{1, 0, 0, 0, 1, 0, 0, 0, 1};
};

}  // namespace mclamp
