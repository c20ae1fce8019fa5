#pragma once

// Two-layer CRF energy on the flattened graph. Every pairwise term is a Potts
// term w_uv * [y_u != y_v], so a model is fully described by its unary table
// and one non-negative weight per edge.

#include <cstddef>
#include <span>
#include <vector>

#include "tlcrf/core.hpp"
#include "tlcrf/fusion_graph.hpp"

namespace tlcrf {

struct EnergyParams {
  double lambda_p = 1.0;
  double lambda_r = 1.0;
  double mu = 1.0;
  double sigma_p = 1.0;
  double sigma_r = 1.0;
  double prob_floor = 1e-6;
};

struct PottsEdge {
  NodeId u;
  NodeId v;
  double weight;
};

class EnergyModel {
 public:
  /// `unary` is node-major, num_nodes * num_classes costs in nats.
  EnergyModel(std::size_t num_nodes, std::size_t num_classes, std::vector<double> unary, std::vector<PottsEdge> edges,
              EnergyParams params = {});

  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t num_classes() const { return num_classes_; }
  std::span<const double> unary(std::size_t node) const {
    return std::span<const double>(unary_).subspan(node * num_classes_, num_classes_);
  }
  std::span<const double> unaries() const { return unary_; }
  const std::vector<PottsEdge>& edges() const { return edges_; }
  const EnergyParams& params() const { return params_; }

 private:
  std::size_t num_nodes_;
  std::size_t num_classes_;
  std::vector<double> unary_;
  std::vector<PottsEdge> edges_;
  EnergyParams params_;
};

/// -ln(max(p, prob_floor)) per node and class, node-major.
std::vector<double> unary_from_probs(const ProbabilityField& probs, double prob_floor);

/// exp(-|a - b|^2 / (2 sigma^2)).
double gaussian_kernel(std::span<const double> a, std::span<const double> b, double sigma);

/// Half the mean feature distance across `edges`, or 1 when that mean is
/// below 1e-12. Throws NoEdges for an empty edge list.
double sigma_heuristic(const FeatureRows& features, std::span<const NodePair> edges);

/// Builds the flattened model: pixel unaries then region unaries, PixelPixel
/// edges weighted lambda_p * K(sigma_p), RegionRegion edges lambda_r * K(sigma_r),
/// Cross edges mu. Edge order follows `graph.edges()`.
EnergyModel assemble(const FusionGraph& graph, const ProbabilityField& pixel_probs,
                     const ProbabilityField& region_probs, const FeatureRaster& pixel_features,
                     const RegionFeatureTable& region_features, const EnergyParams& params);

double evaluate(const EnergyModel& model, std::span<const Label> labeling);

}  // namespace tlcrf
