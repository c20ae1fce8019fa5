#include "tlcrf/pipeline.hpp"

#include "tlcrf/error.hpp"
#include "tlcrf/segmentation.hpp"

namespace tlcrf {

namespace {

double kernel_width(const std::optional<double>& fixed, const FeatureRows& features,
                    const std::vector<NodePair>& edges) {
  if (fixed) return *fixed;
  if (edges.empty()) return 1.0;
  return sigma_heuristic(features, edges);
}

void check_inputs(const FeatureRaster& raster, const RegionMap& regions, const ProbabilityField& pixel_probs,
                  const ProbabilityField& region_probs) {
  if (regions.height() != raster.height() || regions.width() != raster.width()) {
    throw Error(ErrorCode::DimensionMismatch, "region map and raster differ in size");
  }
  if (pixel_probs.num_nodes() != raster.pixel_count()) {
    throw Error(ErrorCode::DimensionMismatch, "pixel posteriors do not cover the raster");
  }
  if (region_probs.num_nodes() != regions.num_regions()) {
    throw Error(ErrorCode::DimensionMismatch, "region posteriors do not match the region count");
  }
}

}  // namespace

FusionProblem build_problem(const FeatureRaster& raster, const RegionMap& regions,
                            const ProbabilityField& pixel_probs, const ProbabilityField& region_probs,
                            const FusionParams& params) {
  check_inputs(raster, regions, pixel_probs, region_probs);
  if (params.sigma && !(*params.sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");

  const auto pixel_features = standardize(raster);
  const auto region_table = standardize(region_features(raster, regions));
  auto graph = flatten(raster.height(), raster.width(), regions);

  EnergyParams energy;
  energy.lambda_p = params.lambda_p;
  energy.lambda_r = params.lambda_r;
  energy.mu = params.mu;
  energy.prob_floor = params.prob_floor;
  energy.sigma_p = kernel_width(params.sigma, pixel_features.rows(), pixel_adjacency(raster.height(), raster.width()));
  energy.sigma_r = kernel_width(params.sigma, region_table.rows(), region_adjacency(regions));

  auto model = assemble(graph, pixel_probs, region_probs, pixel_features, region_table, energy);
  return FusionProblem{std::move(graph), std::move(model)};
}

FusionOutput fuse(const FeatureRaster& raster, const RegionMap& regions, const ProbabilityField& pixel_probs,
                  const ProbabilityField& region_probs, const FusionParams& params) {
  auto problem = build_problem(raster, regions, pixel_probs, region_probs, params);
  auto result = solve(problem.model, params.solver);

  const std::size_t num_pixels = problem.graph.num_pixel_nodes();
  const std::size_t num_classes = problem.model.num_classes();
  std::vector<Label> pixel(result.labeling.begin(), result.labeling.begin() + static_cast<std::ptrdiff_t>(num_pixels));
  std::vector<Label> region(result.labeling.begin() + static_cast<std::ptrdiff_t>(num_pixels), result.labeling.end());

  LabelMap pixel_map(raster.height(), raster.width(), num_classes, std::move(pixel));
  LabelMap broadcast_map = broadcast(regions, region, num_classes);
  const auto& energy = problem.model.params();
  return FusionOutput{std::move(pixel_map), std::move(region), std::move(broadcast_map), std::move(result),
                      energy.sigma_p, energy.sigma_r};
}

BaselineOutput run_baseline(const FeatureRaster& raster, const RegionMap& regions,
                            const ProbabilityField& pixel_probs, const ProbabilityField& region_probs,
                            const FusionParams& params, Layer layer) {
  auto problem = build_problem(raster, regions, pixel_probs, region_probs, params);
  auto result = solve_single_layer(problem.model, problem.graph, layer, params.solver);
  const std::size_t num_classes = problem.model.num_classes();
  std::vector<Label> labels = result.labeling;
  LabelMap pixel_map = layer == Layer::Pixel ? LabelMap(raster.height(), raster.width(), num_classes, labels)
                                             : broadcast(regions, labels, num_classes);
  return BaselineOutput{layer, std::move(labels), std::move(pixel_map), std::move(result)};
}

}  // namespace tlcrf
