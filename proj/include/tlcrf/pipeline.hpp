#pragma once

// End-to-end fusion on one image: graph construction, kernel widths, energy
// assembly and MAP inference, plus the single-layer baselines.

#include <optional>
#include <vector>

#include "tlcrf/core.hpp"
#include "tlcrf/energy.hpp"
#include "tlcrf/fusion_graph.hpp"
#include "tlcrf/solver.hpp"

namespace tlcrf {

struct FusionParams {
  double lambda_p = 1.0;
  double lambda_r = 1.0;
  double mu = 1.0;
  /// Fixed kernel width for both layers; the edge-distance heuristic otherwise.
  std::optional<double> sigma;
  double prob_floor = 1e-6;
  SolverConfig solver;
};

struct FusionProblem {
  FusionGraph graph;
  EnergyModel model;
};

/// Pixel kernels use the z-scored raster; region kernels use z-scored region
/// descriptors computed from the raster as given.
FusionProblem build_problem(const FeatureRaster& raster, const RegionMap& regions,
                            const ProbabilityField& pixel_probs, const ProbabilityField& region_probs,
                            const FusionParams& params);

struct FusionOutput {
  LabelMap pixel_labels;
  std::vector<Label> region_labels;
  /// Region labeling broadcast to pixel resolution.
  LabelMap region_labels_pixel;
  SolverResult solver;
  double sigma_p;
  double sigma_r;
};

FusionOutput fuse(const FeatureRaster& raster, const RegionMap& regions, const ProbabilityField& pixel_probs,
                  const ProbabilityField& region_probs, const FusionParams& params);

struct BaselineOutput {
  Layer layer;
  /// Labels of the chosen layer's nodes.
  std::vector<Label> layer_labels;
  /// Pixel-resolution map (region labels broadcast for the region layer).
  LabelMap pixel_labels;
  SolverResult solver;
};

BaselineOutput run_baseline(const FeatureRaster& raster, const RegionMap& regions,
                            const ProbabilityField& pixel_probs, const ProbabilityField& region_probs,
                            const FusionParams& params, Layer layer);

}  // namespace tlcrf
