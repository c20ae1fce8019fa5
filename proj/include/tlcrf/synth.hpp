#pragma once

#include <cstddef>
#include <cstdint>

#include "tlcrf/core.hpp"

namespace tlcrf {

/// Synthetic scene: a Voronoi partition with one class per cell, a 3-band
/// 8-bit image whose colour depends on the class, and simulated classifier
/// posteriors.
///
/// Each pixel's posterior peaks on a "predicted" class that equals the truth
/// with probability 1 - noise and is otherwise drawn uniformly from the other
/// classes. The peak carries `confidence` on top of a uniform floor:
/// p = (1 - confidence) / C + confidence * [c == predicted]. Image noise is
/// Gaussian with standard deviation `feature_noise * noise` grey levels.
struct SynthParams {
  std::size_t height = 64;
  std::size_t width = 64;
  std::size_t classes = 4;
  double noise = 0.2;
  std::uint64_t seed = 1;
  std::size_t sites = 0;  // 0 picks about one cell per 256 pixels
  double confidence = 0.5;
  double feature_noise = 60.0;
};

struct SynthInstance {
  FeatureRaster image;
  LabelMap truth;
  ProbabilityField pixel_probs;
};

SynthInstance synthesize(const SynthParams& params);

}  // namespace tlcrf
