#pragma once

// Region layer construction: graph-based segmentation, per-region descriptors,
// region reference labels and region-level posteriors.

#include <cstddef>
#include <vector>

#include "tlcrf/core.hpp"

namespace tlcrf {

struct SegmentationParams {
  double k = 300.0;           // scale, in feature-distance units
  std::size_t min_size = 20;  // pixels
  int connectivity = 8;       // 4 or 8
};

/// Graph-based segmentation with the union-find merge predicate
/// w <= min(Int(C1) + k/|C1|, Int(C2) + k/|C2|), followed by absorption of
/// components smaller than min_size along their cheapest edges. Edges are
/// ordered by (weight, first endpoint, second endpoint), so the output is
/// fully deterministic. Ids follow first appearance in row-major order.
RegionMap segment(const FeatureRaster& raster, const SegmentationParams& params);

/// Per region and band: min, max, mean and population standard deviation,
/// concatenated band-major (4 * bands columns).
RegionFeatureTable region_features(const FeatureRaster& raster, const RegionMap& regions);

/// Most frequent labeled class per region, lowest class on ties, kUnlabeled
/// for regions without labeled pixels.
std::vector<Label> majority_label(const RegionMap& regions, const LabelMap& labels);

/// Mean of member-pixel posteriors per region, renormalized to sum to one.
ProbabilityField pool_region_probs(const ProbabilityField& pixel_probs, const RegionMap& regions);

}  // namespace tlcrf
