#include "mclamp/pipeline.hpp"

namespace mclamp {

RawDescriptorSet describe_raw(const GrayImage& image, std::span<const FeatureFrame> frames,
                              const DescribeOptions& options) {
  RawDescriptorSet out;
  for (const auto& f : frames) {
    const auto patch = extract_patch(image, f, options.grid, options.magnification);
    if (!patch) {
      ++out.skipped;
      continue;
    }
    out.frames.push_back(f);
    out.raws.push_back(build_descriptor(*patch, options.grid));
  }
  return out;
}

DescriptorSet apply_policy(const RawDescriptorSet& raw, const ClampPolicy& policy, const DescribeOptions& options) {
  DescriptorSet set;
  set.frames = raw.frames;
  set.descriptors.reserve(raw.raws.size());
  for (const auto& r : raw.raws) set.descriptors.push_back(clamp(r, policy, options.acontrario, options.grid));
  return set;
}

std::vector<PolicyEvaluation> evaluate_policies(const GrayImage& image_a, std::span<const FeatureFrame> frames_a,
                                                const GrayImage& image_b, std::span<const FeatureFrame> frames_b,
                                                const Homography& h, std::span<const ClampPolicy> policies,
                                                const DescribeOptions& options, int sweep_samples) {
  const RawDescriptorSet raw_a = describe_raw(image_a, frames_a, options);
  const RawDescriptorSet raw_b = describe_raw(image_b, frames_b, options);
  // Frames are shared by all policies, so the ground truth is too.
  const auto truth = correspondences(raw_a.frames, raw_b.frames, h);
  std::vector<PolicyEvaluation> out;
  for (const auto& policy : policies) {
    PolicyEvaluation pe{policy, {}};
    pe.evaluation.curve.sample_count = sweep_samples;
    if (!raw_a.frames.empty() && !raw_b.frames.empty()) {
      const DistanceTable table =
          pairwise_distances(apply_policy(raw_a, policy, options), apply_policy(raw_b, policy, options));
      pe.evaluation.curve = pr_curve(table, truth, sweep_samples);
    }
    pe.evaluation.result = average_precision(pe.evaluation.curve);
    out.push_back(std::move(pe));
  }
  return out;
}

}  // namespace mclamp
