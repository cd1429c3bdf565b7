#include "mclamp/descriptor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mclamp {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t >= kTwoPi ? 0.0 : t;
}

// Indices of the (at most two) bins whose tent support may contain z.
void spatial_candidates(double z, int n, double lambda, int out[2], int& count) {
  const double width = 2.0 * lambda / n;
  const int lo = static_cast<int>(std::floor((z + lambda) / width - 0.5));
  count = 0;
  for (int i = lo; i <= lo + 1; ++i)
    if (i >= 0 && i < n) out[count++] = i;
}

void angular_candidates(double theta, int n, int out[2], int& count) {
  const int lo = static_cast<int>(std::floor(theta / (kTwoPi / n)));
  count = 0;
  for (int k = lo; k <= lo + 1; ++k) {
    const int wrapped = ((k % n) + n) % n;
    if (count == 1 && out[0] == wrapped) continue;
    out[count++] = wrapped;
  }
}

}  // namespace

Patch::Patch(int side_in, std::vector<double> values) : side(side_in), intensities(std::move(values)) {
  if (side <= 0) throw std::invalid_argument("patch side must be positive");
  if (intensities.size() != static_cast<std::size_t>(side) * side)
    throw std::invalid_argument("patch intensities must be side x side");
  for (double v : intensities)
    if (!std::isfinite(v)) throw std::invalid_argument("patch intensities must be finite");
}

bool NormalizedDescriptor::is_sentinel() const {
  return std::all_of(bins.begin(), bins.end(), [](double b) { return b == 0.0; });
}

ClampPolicy ClampPolicy::lowe(double c) {
  if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("Lowe clamp c must lie in (0, 1]");
  return {Kind::kLowe, c};
}

ClampPolicy ClampPolicy::parse(const std::string& name, double lowe_c) {
  if (name == "none") return none();
  if (name == "lowe") return lowe(lowe_c);
  if (name == "mc-exact") return meaningful_exact();
  if (name == "mc-approx") return meaningful_approx();
  throw std::invalid_argument("unknown clamp policy '" + name + "' (none|lowe|mc-exact|mc-approx)");
}

std::string ClampPolicy::name() const {
  switch (kind) {
    case Kind::kNone: return "none";
    case Kind::kLowe: return "lowe";
    case Kind::kMeaningfulExact: return "mc-exact";
    case Kind::kMeaningfulApprox: return "mc-approx";
  }
  return "unknown";
}

double spatial_weight(double z, int n_z, double lambda_patch) {
  return std::max(0.0, 1.0 - (n_z / (2.0 * lambda_patch)) * std::fabs(z));
}

double angular_weight(double theta, double theta_k, int n_theta) {
  double d = std::fabs(wrap_angle(theta) - wrap_angle(theta_k));
  if (d > std::numbers::pi) d = kTwoPi - d;
  return std::max(0.0, 1.0 - (n_theta / kTwoPi) * d);
}

GradientField gradient_field(const Patch& patch) {
  const int n = patch.side;
  if (n < 3) throw std::invalid_argument("patch too small for gradients (side < 3)");
  GradientField field;
  field.side = n;
  field.magnitude.resize(static_cast<std::size_t>(n) * n);
  field.orientation.resize(field.magnitude.size());

  // Central differences inside, one-sided differences on the border.
  const auto diff = [n](auto sample, int i) {
    if (i == 0) return sample(1) - sample(0);
    if (i == n - 1) return sample(n - 1) - sample(n - 2);
    return 0.5 * (sample(i + 1) - sample(i - 1));
  };
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const double gx = diff([&](int i) { return patch.at(i, r); }, c);
      const double gy = diff([&](int j) { return patch.at(c, j); }, r);
      const std::size_t idx = static_cast<std::size_t>(r) * n + c;
      field.magnitude[idx] = std::hypot(gx, gy);
      field.orientation[idx] = field.magnitude[idx] > 0.0 ? wrap_angle(std::atan2(gy, gx)) : 0.0;
    }
  }
  return field;
}

RawDescriptor build_descriptor(const Patch& patch, const HistogramGrid& grid) {
  grid.validate();
  if (patch.side != grid.patch_side())
    throw std::invalid_argument("patch side " + std::to_string(patch.side) + " does not match grid side " +
                                std::to_string(grid.patch_side()));
  const GradientField field = gradient_field(patch);

  RawDescriptor raw;
  raw.bins.assign(grid.bin_count(), 0.0);
  raw.bin_probability = grid.bin_probability();

  const double half = patch.side / 2.0;
  const double inv_two_sigma2 = 1.0 / (2.0 * grid.sigma * grid.sigma);
  int xs[2], ys[2], ks[2];
  int nx = 0, ny = 0, nk = 0;
  for (int r = 0; r < patch.side; ++r) {
    const double y = r + 0.5 - half;
    spatial_candidates(y, grid.n_y, grid.lambda_patch, ys, ny);
    for (int c = 0; c < patch.side; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r) * patch.side + c;
      const double mag = field.magnitude[idx];
      if (mag == 0.0) continue;
      const double x = c + 0.5 - half;
      const double theta = field.orientation[idx];
      const double sample = std::exp(-(x * x + y * y) * inv_two_sigma2) * mag;
      spatial_candidates(x, grid.n_x, grid.lambda_patch, xs, nx);
      angular_candidates(theta, grid.n_theta, ks, nk);
      for (int a = 0; a < ny; ++a) {
        const double wy = spatial_weight(y - grid.y_center(ys[a]), grid.n_y, grid.lambda_patch);
        if (wy == 0.0) continue;
        for (int b = 0; b < nx; ++b) {
          const double wx = spatial_weight(x - grid.x_center(xs[b]), grid.n_x, grid.lambda_patch);
          if (wx == 0.0) continue;
          for (int e = 0; e < nk; ++e) {
            const double wt = angular_weight(theta, grid.theta_center(ks[e]), grid.n_theta);
            raw.bins[grid.index(xs[b], ys[a], ks[e])] += sample * wx * wy * wt;
          }
        }
      }
    }
  }
  for (double b : raw.bins) raw.mass += b;
  return raw;
}

NormalizedDescriptor normalize(std::span<const double> bins) {
  NormalizedDescriptor out;
  out.bins.assign(bins.begin(), bins.end());
  double sum_sq = 0.0;
  for (double b : bins) sum_sq += b * b;
  if (!(sum_sq > 0.0)) {
    std::fill(out.bins.begin(), out.bins.end(), 0.0);
    return out;
  }
  const double inv = 1.0 / std::sqrt(sum_sq);
  for (double& b : out.bins) b *= inv;
  return out;
}

ClampedBins clamp_bins(const RawDescriptor& raw, const ClampPolicy& policy,
                       const AContrarioConfig& cfg, const HistogramGrid& grid) {
  if (raw.bins.size() != grid.bin_count())
    throw std::invalid_argument("descriptor length does not match the grid");
  ClampedBins out;
  if (policy.kind == ClampPolicy::Kind::kNone) {
    out.bins = raw.bins;
    return out;
  }
  if (policy.kind == ClampPolicy::Kind::kLowe) {
    out.bins = normalize(raw).bins;
    out.cap = policy.c;
    for (double& b : out.bins) b = std::min(b, policy.c);
    return out;
  }

  out.bins = raw.bins;
  if (!(raw.mass > 0.0)) return out;
  const double tests = test_count(cfg, grid);
  const double p = grid.bin_probability();
  if (policy.kind == ClampPolicy::Kind::kMeaningfulExact) {
    const ExactThreshold t = exact_threshold(cfg, tests, raw.mass, p);
    out.cap = static_cast<double>(t.value);
    out.saturated = t.saturated;
  } else {
    out.cap = approx_threshold(tests, raw.mass, p);
  }
  for (double& b : out.bins) b = std::min(b, *out.cap);
  return out;
}

NormalizedDescriptor clamp(const RawDescriptor& raw, const ClampPolicy& policy,
                           const AContrarioConfig& cfg, const HistogramGrid& grid) {
  return normalize(clamp_bins(raw, policy, cfg, grid).bins);
}

}  // namespace mclamp
