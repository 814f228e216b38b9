#pragma once

#include <vector>

#include "fvs/graph.hpp"

namespace fvs {

/// Greedy heuristic: apply the simple reductions, and when stuck delete the
/// highest-degree vertex (smallest id on ties). Vertices are returned in the
/// order they left the graph, which is the order branching hints consume.
[[nodiscard]] Solution approximate(const MultiGraph& g);

/// A shortest cycle through v as a vertex sequence, or empty if v lies on no
/// cycle. Loops give {v}; a double edge gives {v, w}.
[[nodiscard]] std::vector<VertexId> shortest_cycle_through(const MultiGraph& g, VertexId v);

/// Shortest cycle of the whole graph; first found in id order among ties.
[[nodiscard]] std::vector<VertexId> shortest_cycle(const MultiGraph& g);

/// ILP warm start: repeatedly take a shortest cycle, delete its
/// highest-degree vertex, until the graph is a forest.
[[nodiscard]] Solution shortest_cycle_warm_start(const MultiGraph& g);

}  // namespace fvs
