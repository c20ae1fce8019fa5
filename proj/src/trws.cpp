#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "tlcrf/error.hpp"
#include "tlcrf/solver.hpp"

namespace tlcrf {

namespace {

constexpr double kGapTolerance = 1e-9;

struct LocalEdge {
  std::uint32_t u;  // local index, u < v
  std::uint32_t v;
  double weight;
};

struct ComponentRun {
  std::vector<NodeId> nodes;  // ascending global ids
  std::vector<Label> labeling;
  std::vector<double> bounds;
  std::vector<double> energies;
  double best_energy = std::numeric_limits<double>::infinity();
  bool converged = false;
};

// Connected components over the positive-weight edges, ordered by smallest node.
std::vector<std::vector<NodeId>> components(const EnergyModel& model) {
  const std::size_t n = model.num_nodes();
  std::vector<NodeId> parent(n);
  std::iota(parent.begin(), parent.end(), NodeId{0});
  auto find = [&](NodeId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& e : model.edges()) {
    if (e.weight <= 0.0) continue;
    const NodeId a = find(e.u);
    const NodeId b = find(e.v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> slot(n, std::numeric_limits<std::size_t>::max());
  std::vector<std::vector<NodeId>> out;
  for (NodeId i = 0; i < n; ++i) {
    const NodeId r = find(i);
    if (slot[r] == std::numeric_limits<std::size_t>::max()) {
      slot[r] = out.size();
      out.emplace_back();
    }
    out[slot[r]].push_back(i);
  }
  return out;
}

class ComponentSolver {
 public:
  ComponentSolver(const EnergyModel& model, const std::vector<NodeId>& nodes, const std::vector<LocalEdge>& edges)
      : model_(model), nodes_(nodes), edges_(edges), num_classes_(model.num_classes()),
        forward_(nodes.size()), backward_(nodes.size()), gamma_(nodes.size(), 1.0),
        to_u_(edges.size() * num_classes_, 0.0), to_v_(edges.size() * num_classes_, 0.0),
        belief_(num_classes_), scratch_(num_classes_) {
    for (std::uint32_t e = 0; e < edges_.size(); ++e) {
      forward_[edges_[e].u].push_back(e);
      backward_[edges_[e].v].push_back(e);
    }
    for (std::size_t s = 0; s < nodes_.size(); ++s) {
      const std::size_t n = std::max(forward_[s].size(), backward_[s].size());
      if (n > 0) gamma_[s] = 1.0 / static_cast<double>(n);
    }
  }

  // One forward and one backward pass. Returns the backward-pass bound.
  double sweep() {
    for (std::size_t s = 0; s < nodes_.size(); ++s) {
      gather(s);
      for (std::uint32_t e : forward_[s]) send(s, e, to_u_, to_v_);
    }
    double bound = 0.0;
    for (std::size_t s = nodes_.size(); s-- > 0;) {
      gather(s);
      const double coeff = 1.0 - static_cast<double>(backward_[s].size()) * gamma_[s];
      if (coeff > 0.0) bound += coeff * *std::min_element(belief_.begin(), belief_.end());
      for (std::uint32_t e : backward_[s]) bound += send(s, e, to_v_, to_u_);
    }
    return bound;
  }

  // Sequential conditioning: earlier neighbours by their decoded labels,
  // later neighbours through their messages.
  std::vector<Label> decode() const {
    std::vector<Label> labels(nodes_.size(), 0);
    std::vector<double> cost(num_classes_);
    for (std::size_t s = 0; s < nodes_.size(); ++s) {
      const auto unary = model_.unary(nodes_[s]);
      std::copy(unary.begin(), unary.end(), cost.begin());
      for (std::uint32_t e : forward_[s]) {
        const double* m = &to_u_[e * num_classes_];
        for (std::size_t c = 0; c < num_classes_; ++c) cost[c] += m[c];
      }
      for (std::uint32_t e : backward_[s]) {
        const Label other = labels[edges_[e].u];
        for (std::size_t c = 0; c < num_classes_; ++c) {
          if (c != other) cost[c] += edges_[e].weight;
        }
      }
      labels[s] = static_cast<Label>(std::min_element(cost.begin(), cost.end()) - cost.begin());
    }
    return labels;
  }

  double energy(const std::vector<Label>& labels) const {
    double total = 0.0;
    for (std::size_t s = 0; s < nodes_.size(); ++s) total += model_.unary(nodes_[s])[labels[s]];
    for (const auto& e : edges_) {
      if (labels[e.u] != labels[e.v]) total += e.weight;
    }
    return total;
  }

 private:
  // belief_ <- unary + all incoming messages.
  void gather(std::size_t s) {
    const auto unary = model_.unary(nodes_[s]);
    std::copy(unary.begin(), unary.end(), belief_.begin());
    for (std::uint32_t e : forward_[s]) {
      const double* m = &to_u_[e * num_classes_];
      for (std::size_t c = 0; c < num_classes_; ++c) belief_[c] += m[c];
    }
    for (std::uint32_t e : backward_[s]) {
      const double* m = &to_v_[e * num_classes_];
      for (std::size_t c = 0; c < num_classes_; ++c) belief_[c] += m[c];
    }
  }

  // Potts message from s across edge e. `incoming` holds the message into s,
  // `outgoing` the one being rewritten. Returns the normalization constant.
  double send(std::size_t s, std::uint32_t e, const std::vector<double>& incoming, std::vector<double>& outgoing) {
    const double* in = &incoming[e * num_classes_];
    double hmin = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < num_classes_; ++c) {
      scratch_[c] = gamma_[s] * belief_[c] - in[c];
      hmin = std::min(hmin, scratch_[c]);
    }
    const double w = edges_[e].weight;
    double* out = &outgoing[e * num_classes_];
    for (std::size_t c = 0; c < num_classes_; ++c) out[c] = std::min(scratch_[c] - hmin, w);
    return hmin;
  }

  const EnergyModel& model_;
  const std::vector<NodeId>& nodes_;
  const std::vector<LocalEdge>& edges_;
  std::size_t num_classes_;
  std::vector<std::vector<std::uint32_t>> forward_;
  std::vector<std::vector<std::uint32_t>> backward_;
  std::vector<double> gamma_;
  std::vector<double> to_u_;  // message v -> u, indexed by edge
  std::vector<double> to_v_;  // message u -> v
  std::vector<double> belief_;
  std::vector<double> scratch_;
};

void run_component(const EnergyModel& model, const std::vector<LocalEdge>& edges, const SolverConfig& config,
                   ComponentRun& run) {
  ComponentSolver solver(model, run.nodes, edges);
  double previous = -std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < config.max_iterations; ++it) {
    const double bound = solver.sweep();
    auto labels = solver.decode();
    const double e = solver.energy(labels);
    if (e < run.best_energy) {
      run.best_energy = e;
      run.labeling = std::move(labels);
    }
    run.bounds.push_back(bound);
    run.energies.push_back(e);
    if (run.best_energy - bound <= kGapTolerance * std::max(1.0, std::abs(run.best_energy)) ||
        (it > 0 && bound - previous < config.energy_tolerance)) {
      run.converged = true;
      break;
    }
    previous = bound;
  }
}

}  // namespace

SolverResult trws_solve(const EnergyModel& model, const SolverConfig& config) {
  if (config.max_iterations < 1) throw Error(ErrorCode::InvalidArgument, "max_iterations must be at least 1");
  if (!(config.energy_tolerance >= 0.0)) throw Error(ErrorCode::InvalidArgument, "energy_tolerance must be >= 0");

  const std::size_t n = model.num_nodes();
  const auto groups = components(model);

  // Global -> (component, local index).
  std::vector<std::uint32_t> component_of(n);
  std::vector<std::uint32_t> local_of(n);
  for (std::uint32_t c = 0; c < groups.size(); ++c) {
    for (std::uint32_t i = 0; i < groups[c].size(); ++i) {
      component_of[groups[c][i]] = c;
      local_of[groups[c][i]] = i;
    }
  }
  std::vector<std::vector<LocalEdge>> local_edges(groups.size());
  for (const auto& e : model.edges()) {
    if (e.weight <= 0.0) continue;
    const NodeId a = std::min(e.u, e.v);
    const NodeId b = std::max(e.u, e.v);
    local_edges[component_of[a]].push_back({local_of[a], local_of[b], e.weight});
  }

  std::vector<ComponentRun> runs(groups.size());
  for (std::size_t c = 0; c < groups.size(); ++c) {
    runs[c].nodes = groups[c];
    run_component(model, local_edges[c], config, runs[c]);
  }

  SolverResult result;
  result.labeling.assign(n, 0);
  result.converged = true;
  std::size_t sweeps = 0;
  for (const auto& run : runs) {
    for (std::size_t i = 0; i < run.nodes.size(); ++i) result.labeling[run.nodes[i]] = run.labeling[i];
    result.converged = result.converged && run.converged;
    sweeps = std::max(sweeps, run.bounds.size());
  }
  result.iterations_run = sweeps;
  result.bound_trace.assign(sweeps, 0.0);
  result.energy_trace.assign(sweeps, 0.0);
  for (const auto& run : runs) {
    for (std::size_t k = 0; k < sweeps; ++k) {
      const bool active = k < run.bounds.size();
      result.bound_trace[k] += active ? run.bounds[k] : run.bounds.back();
      result.energy_trace[k] += active ? run.energies[k] : run.best_energy;
    }
  }
  double bound = 0.0;
  for (const auto& run : runs) bound += *std::max_element(run.bounds.begin(), run.bounds.end());
  result.lower_bound = bound;
  result.energy = evaluate(model, result.labeling);
  return result;
}

}  // namespace tlcrf
