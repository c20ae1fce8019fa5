#include "tlcrf/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "tlcrf/error.hpp"

namespace tlcrf {

namespace {

struct Neighbor {
  NodeId node;
  double weight;
};

std::vector<std::vector<Neighbor>> adjacency(const EnergyModel& model) {
  std::vector<std::vector<Neighbor>> adj(model.num_nodes());
  for (const auto& e : model.edges()) {
    adj[e.u].push_back({e.v, e.weight});
    adj[e.v].push_back({e.u, e.weight});
  }
  return adj;
}

Label unary_argmin(const EnergyModel& model, std::size_t node) {
  const auto u = model.unary(node);
  return static_cast<Label>(std::min_element(u.begin(), u.end()) - u.begin());
}

}  // namespace

const char* to_string(SolverMethod method) noexcept {
  switch (method) {
    case SolverMethod::TRWS: return "trws";
    case SolverMethod::ICM: return "icm";
    case SolverMethod::BruteForce: return "brute-force";
  }
  return "unknown";
}

const char* to_string(Layer layer) noexcept {
  return layer == Layer::Pixel ? "pixel" : "region";
}

SolverResult icm_solve(const EnergyModel& model, const SolverConfig& config) {
  if (config.max_iterations < 1) throw Error(ErrorCode::InvalidArgument, "max_iterations must be at least 1");
  const std::size_t n = model.num_nodes();
  const std::size_t num_classes = model.num_classes();
  const auto adj = adjacency(model);

  SolverResult result;
  result.labeling.resize(n);
  for (std::size_t s = 0; s < n; ++s) result.labeling[s] = unary_argmin(model, s);

  std::vector<double> cost(num_classes);
  for (std::size_t it = 0; it < config.max_iterations; ++it) {
    bool changed = false;
    for (std::size_t s = 0; s < n; ++s) {
      const auto u = model.unary(s);
      std::copy(u.begin(), u.end(), cost.begin());
      for (const auto& nb : adj[s]) {
        const Label other = result.labeling[nb.node];
        for (std::size_t c = 0; c < num_classes; ++c) {
          if (c != other) cost[c] += nb.weight;
        }
      }
      const Label current = result.labeling[s];
      const auto best = static_cast<Label>(std::min_element(cost.begin(), cost.end()) - cost.begin());
      // Only strict improvements move a node, so the energy never increases.
      if (cost[best] < cost[current]) {
        result.labeling[s] = best;
        changed = true;
      }
    }
    result.iterations_run = it + 1;
    if (!changed) {
      result.converged = true;
      break;
    }
  }
  result.energy = evaluate(model, result.labeling);
  result.lower_bound = -std::numeric_limits<double>::infinity();
  return result;
}

SolverResult brute_force_solve(const EnergyModel& model) {
  const std::size_t n = model.num_nodes();
  const std::size_t num_classes = model.num_classes();
  const double bits = static_cast<double>(n) * std::log2(static_cast<double>(num_classes));
  if (bits > 24.0 + 1e-9) {
    throw Error(ErrorCode::InstanceTooLarge, "exhaustive search limited to 2^24 labelings");
  }

  // Edges to earlier nodes, so a partial assignment can be scored incrementally.
  std::vector<std::vector<Neighbor>> earlier(n);
  for (const auto& e : model.edges()) {
    const NodeId a = std::min(e.u, e.v);
    const NodeId b = std::max(e.u, e.v);
    earlier[b].push_back({a, e.weight});
  }
  // Cheapest possible completion from node s onward, for pruning.
  std::vector<double> rest(n + 1, 0.0);
  for (std::size_t s = n; s-- > 0;) {
    const auto u = model.unary(s);
    rest[s] = rest[s + 1] + *std::min_element(u.begin(), u.end());
  }

  std::vector<Label> current(n, 0);
  std::vector<Label> best(n, 0);
  double best_energy = std::numeric_limits<double>::infinity();
  std::vector<double> partial(n + 1, 0.0);

  // Depth-first in lexicographic order; only strictly better leaves replace the
  // incumbent, which keeps the lexicographically smallest optimum.
  auto slack = [](double e) { return std::isfinite(e) ? 1e-12 * std::max(1.0, std::abs(e)) : 0.0; };
  std::size_t depth = 0;
  std::vector<std::size_t> next(n + 1, 0);
  while (true) {
    if (depth == n) {
      if (partial[n] < best_energy - slack(best_energy)) {
        best_energy = partial[n];
        best = current;
      }
      --depth;
      if (n == 0) break;
      continue;
    }
    if (next[depth] == num_classes) {
      next[depth] = 0;
      if (depth == 0) break;
      --depth;
      continue;
    }
    const auto label = static_cast<Label>(next[depth]++);
    current[depth] = label;
    double e = partial[depth] + model.unary(depth)[label];
    for (const auto& nb : earlier[depth]) {
      if (current[nb.node] != label) e += nb.weight;
    }
    if (e + rest[depth + 1] > best_energy + slack(best_energy)) continue;
    partial[depth + 1] = e;
    ++depth;
  }

  SolverResult result;
  result.labeling = std::move(best);
  result.energy = evaluate(model, result.labeling);
  result.lower_bound = -std::numeric_limits<double>::infinity();
  result.iterations_run = 1;
  result.converged = true;
  return result;
}

SolverResult solve(const EnergyModel& model, const SolverConfig& config) {
  switch (config.method) {
    case SolverMethod::TRWS: return trws_solve(model, config);
    case SolverMethod::ICM: return icm_solve(model, config);
    case SolverMethod::BruteForce: return brute_force_solve(model);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown solver method");
}

EnergyModel restrict_to_layer(const EnergyModel& model, const FusionGraph& graph, Layer layer) {
  if (model.num_nodes() != graph.num_nodes() || model.edges().size() != graph.edges().size()) {
    throw Error(ErrorCode::DimensionMismatch, "energy model was not assembled on this graph");
  }
  const std::size_t offset = layer == Layer::Pixel ? 0 : graph.num_pixel_nodes();
  const std::size_t count = layer == Layer::Pixel ? graph.num_pixel_nodes() : graph.num_region_nodes();
  const EdgeKind kind = layer == Layer::Pixel ? EdgeKind::PixelPixel : EdgeKind::RegionRegion;
  const std::size_t num_classes = model.num_classes();

  const auto all = model.unaries();
  std::vector<double> unary(all.begin() + static_cast<std::ptrdiff_t>(offset * num_classes),
                            all.begin() + static_cast<std::ptrdiff_t>((offset + count) * num_classes));
  std::vector<PottsEdge> edges;
  for (std::size_t i = 0; i < graph.edges().size(); ++i) {
    if (graph.edges()[i].kind != kind) continue;
    const auto& e = model.edges()[i];
    edges.push_back({static_cast<NodeId>(e.u - offset), static_cast<NodeId>(e.v - offset), e.weight});
  }
  return EnergyModel(count, num_classes, std::move(unary), std::move(edges), model.params());
}

SolverResult solve_single_layer(const EnergyModel& model, const FusionGraph& graph, Layer layer,
                                const SolverConfig& config) {
  return solve(restrict_to_layer(model, graph, layer), config);
}

double layer_energy(const EnergyModel& model, const FusionGraph& graph, std::span<const Label> joint_labeling,
                    Layer layer) {
  if (joint_labeling.size() != graph.num_nodes()) {
    throw Error(ErrorCode::DimensionMismatch, "joint labeling length does not match the graph");
  }
  const std::size_t offset = layer == Layer::Pixel ? 0 : graph.num_pixel_nodes();
  const std::size_t count = layer == Layer::Pixel ? graph.num_pixel_nodes() : graph.num_region_nodes();
  return evaluate(restrict_to_layer(model, graph, layer), joint_labeling.subspan(offset, count));
}

void write_trace_csv(const SolverResult& result, std::ostream& out) {
  out << "sweep,lower_bound,current_energy\n";
  out << std::setprecision(17);
  for (std::size_t k = 0; k < result.bound_trace.size(); ++k) {
    out << (k + 1) << ',' << result.bound_trace[k] << ',' << result.energy_trace[k] << '\n';
  }
}

}  // namespace tlcrf
