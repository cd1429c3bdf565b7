#pragma once

// Glue between the modules: frames -> raw descriptors -> clamped
// descriptors -> per-pair evaluation.

#include <span>
#include <vector>

#include "mclamp/acontrario.hpp"
#include "mclamp/dataset.hpp"
#include "mclamp/descriptor.hpp"
#include "mclamp/evaluation.hpp"

namespace mclamp {

struct DescribeOptions {
  HistogramGrid grid;
  AContrarioConfig acontrario;
  double magnification = kDefaultMagnification;
};

// Raw histograms of the frames that survive the border check.
struct RawDescriptorSet {
  std::vector<FeatureFrame> frames;
  std::vector<RawDescriptor> raws;
  std::size_t skipped = 0;
};

RawDescriptorSet describe_raw(const GrayImage& image, std::span<const FeatureFrame> frames,
                              const DescribeOptions& options);

DescriptorSet apply_policy(const RawDescriptorSet& raw, const ClampPolicy& policy, const DescribeOptions& options);

struct PolicyEvaluation {
  ClampPolicy policy;
  PairEvaluation evaluation;
};

// Describes both images once and evaluates every policy on the same frames.
std::vector<PolicyEvaluation> evaluate_policies(const GrayImage& image_a, std::span<const FeatureFrame> frames_a,
                                                const GrayImage& image_b, std::span<const FeatureFrame> frames_b,
                                                const Homography& h, std::span<const ClampPolicy> policies,
                                                const DescribeOptions& options, int sweep_samples);

}  // namespace mclamp
