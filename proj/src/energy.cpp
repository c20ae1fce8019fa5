#include "tlcrf/energy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tlcrf/error.hpp"

namespace tlcrf {

EnergyModel::EnergyModel(std::size_t num_nodes, std::size_t num_classes, std::vector<double> unary,
                         std::vector<PottsEdge> edges, EnergyParams params)
    : num_nodes_(num_nodes), num_classes_(num_classes), unary_(std::move(unary)), edges_(std::move(edges)),
      params_(params) {
  if (num_classes_ < 1) throw Error(ErrorCode::InvalidArgument, "energy model needs at least one class");
  if (unary_.size() != num_nodes_ * num_classes_) {
    throw Error(ErrorCode::DimensionMismatch, "unary table does not match nodes x classes");
  }
  for (double c : unary_) {
    if (!std::isfinite(c) || c < 0.0) throw Error(ErrorCode::InvalidArgument, "unary costs must be finite and >= 0");
  }
  for (const auto& e : edges_) {
    if (e.u == e.v || e.u >= num_nodes_ || e.v >= num_nodes_) {
      throw Error(ErrorCode::InvalidArgument, "edge endpoints out of range");
    }
    if (!std::isfinite(e.weight) || e.weight < 0.0) {
      throw Error(ErrorCode::InvalidArgument, "edge weights must be finite and >= 0");
    }
  }
}

std::vector<double> unary_from_probs(const ProbabilityField& probs, double prob_floor) {
  if (!(prob_floor > 0.0 && prob_floor < 1.0)) {
    throw Error(ErrorCode::InvalidFloor, "probability floor must lie in (0, 1), got " + std::to_string(prob_floor));
  }
  std::vector<double> costs(probs.probs().size());
  for (std::size_t i = 0; i < costs.size(); ++i) {
    costs[i] = -std::log(std::max(static_cast<double>(probs.probs()[i]), prob_floor));
  }
  return costs;
}

double gaussian_kernel(std::span<const double> a, std::span<const double> b, double sigma) {
  double sq = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    sq += d * d;
  }
  return std::exp(-sq / (2.0 * sigma * sigma));
}

double sigma_heuristic(const FeatureRows& features, std::span<const NodePair> edges) {
  if (edges.empty()) throw Error(ErrorCode::NoEdges, "sigma heuristic needs at least one edge");
  double total = 0.0;
  for (const auto& e : edges) {
    auto a = features.row(e.u);
    auto b = features.row(e.v);
    double sq = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double d = a[k] - b[k];
      sq += d * d;
    }
    total += std::sqrt(sq);
  }
  const double mean = total / static_cast<double>(edges.size());
  return mean < 1e-12 ? 1.0 : 0.5 * mean;
}

EnergyModel assemble(const FusionGraph& graph, const ProbabilityField& pixel_probs,
                     const ProbabilityField& region_probs, const FeatureRaster& pixel_features,
                     const RegionFeatureTable& region_features, const EnergyParams& params) {
  const std::size_t num_pixels = graph.num_pixel_nodes();
  const std::size_t num_regions = graph.num_region_nodes();
  if (pixel_probs.num_nodes() != num_pixels || pixel_features.pixel_count() != num_pixels) {
    throw Error(ErrorCode::DimensionMismatch, "pixel inputs do not match the graph's pixel layer");
  }
  if (region_probs.num_nodes() != num_regions || region_features.num_regions() != num_regions) {
    throw Error(ErrorCode::DimensionMismatch, "region inputs do not match the graph's region layer");
  }
  if (pixel_probs.num_classes() != region_probs.num_classes()) {
    throw Error(ErrorCode::DimensionMismatch, "pixel and region posteriors disagree on the number of classes");
  }
  if (params.lambda_p < 0 || params.lambda_r < 0 || params.mu < 0) {
    throw Error(ErrorCode::InvalidArgument, "lambda and mu must be non-negative");
  }
  if (!(params.sigma_p > 0) || !(params.sigma_r > 0)) {
    throw Error(ErrorCode::InvalidArgument, "kernel widths must be positive");
  }

  auto unary = unary_from_probs(pixel_probs, params.prob_floor);
  const auto region_unary = unary_from_probs(region_probs, params.prob_floor);
  unary.insert(unary.end(), region_unary.begin(), region_unary.end());

  const auto num_pixel_nodes = static_cast<NodeId>(num_pixels);
  std::vector<PottsEdge> edges;
  edges.reserve(graph.edges().size());
  for (const auto& e : graph.edges()) {
    double w = 0.0;
    switch (e.kind) {
      case EdgeKind::PixelPixel:
        w = params.lambda_p * gaussian_kernel(pixel_features.pixel(e.u), pixel_features.pixel(e.v), params.sigma_p);
        break;
      case EdgeKind::RegionRegion:
        w = params.lambda_r * gaussian_kernel(region_features.row(e.u - num_pixel_nodes),
                                              region_features.row(e.v - num_pixel_nodes), params.sigma_r);
        break;
      case EdgeKind::Cross:
        w = params.mu;
        break;
    }
    edges.push_back({e.u, e.v, w});
  }
  return EnergyModel(graph.num_nodes(), pixel_probs.num_classes(), std::move(unary), std::move(edges), params);
}

double evaluate(const EnergyModel& model, std::span<const Label> labeling) {
  if (labeling.size() != model.num_nodes()) {
    throw Error(ErrorCode::DimensionMismatch, "labeling length does not match the model");
  }
  double energy = 0.0;
  for (std::size_t n = 0; n < labeling.size(); ++n) {
    if (labeling[n] >= model.num_classes()) {
      throw Error(ErrorCode::LabelOutOfRange, "node " + std::to_string(n) + " has label " +
                                                  std::to_string(labeling[n]));
    }
    energy += model.unary(n)[labeling[n]];
  }
  for (const auto& e : model.edges()) {
    if (labeling[e.u] != labeling[e.v]) energy += e.weight;
  }
  return energy;
}

}  // namespace tlcrf
