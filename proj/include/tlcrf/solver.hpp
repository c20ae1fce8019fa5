#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "tlcrf/energy.hpp"
#include "tlcrf/fusion_graph.hpp"

namespace tlcrf {

enum class SolverMethod { TRWS, ICM, BruteForce };

const char* to_string(SolverMethod method) noexcept;

struct SolverConfig {
  std::size_t max_iterations = 100;
  /// Stop once a sweep raises the lower bound by less than this (nats).
  double energy_tolerance = 1e-4;
  SolverMethod method = SolverMethod::TRWS;
};

struct SolverResult {
  std::vector<Label> labeling;
  /// Recomputed from the labeling with evaluate().
  double energy = 0.0;
  /// Minus infinity for solvers that do not produce a bound.
  double lower_bound = 0.0;
  std::size_t iterations_run = 0;
  bool converged = false;
  /// One entry per sweep (TRW-S only).
  std::vector<double> bound_trace;
  std::vector<double> energy_trace;
};

/// Sequential tree-reweighted message passing with Potts messages.
///
/// Nodes are processed in ascending id order, forward then backward. Each node
/// scales its reparameterized unary by 1 / max(#earlier neighbours, #later
/// neighbours) before sending. The lower bound is accumulated during the
/// backward pass and is non-decreasing from sweep to sweep. After each sweep a
/// labeling is decoded by conditioning each node on its already-labeled
/// earlier neighbours and on the messages from its later neighbours; the best
/// labeling seen is returned.
///
/// Zero-weight edges carry no information and are dropped, after which every
/// connected component is solved independently with its own stopping test.
/// The reported trace is the per-sweep sum over components.
SolverResult trws_solve(const EnergyModel& model, const SolverConfig& config);

/// Iterated conditional modes from the unary argmin, sweeping in id order.
SolverResult icm_solve(const EnergyModel& model, const SolverConfig& config);

/// Exhaustive search. Returns the lexicographically smallest optimum.
/// Throws InstanceTooLarge when num_nodes * log2(num_classes) > 24.
SolverResult brute_force_solve(const EnergyModel& model);

/// Dispatches on config.method.
SolverResult solve(const EnergyModel& model, const SolverConfig& config);

enum class Layer { Pixel, Region };

const char* to_string(Layer layer) noexcept;

/// Single-layer model: that layer's unaries and intra-layer edges only, with
/// nodes renumbered from zero in the original order. `model` must come from
/// assemble() on `graph`.
EnergyModel restrict_to_layer(const EnergyModel& model, const FusionGraph& graph, Layer layer);

SolverResult solve_single_layer(const EnergyModel& model, const FusionGraph& graph, Layer layer,
                                const SolverConfig& config);

/// Energy of one layer's part of a joint labeling (its unaries and intra-layer edges).
double layer_energy(const EnergyModel& model, const FusionGraph& graph, std::span<const Label> joint_labeling,
                    Layer layer);

/// `sweep,lower_bound,current_energy`, one row per sweep.
void write_trace_csv(const SolverResult& result, std::ostream& out);

}  // namespace tlcrf
