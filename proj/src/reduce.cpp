#include "fvs/reduce.hpp"

#include <algorithm>
#include <functional>

namespace fvs {

namespace {

// Applies the first rule that fires at v. The queue already holds every
// vertex whose neighborhood changed, so one pass per entry suffices.
void reduce_vertex(Instance& inst, VertexId v, const ReductionOptions& options) {
  MultiGraph& g = inst.graph;

  if (g.cap_multiplicities(v, 2) > 0) inst.enqueue_neighbors(v);

  if (g.degree(v) <= 1) {
    inst.discard_vertex(v);
    return;
  }

  if (g.has_loop(v)) {
    if (inst.is_undeletable(v)) {
      inst.infeasible = true;
    } else {
      inst.take_into_solution(v);
    }
    return;
  }

  if (inst.is_undeletable(v)) {
    for (const auto& nb : g.neighbors(v)) {
      if (inst.is_undeletable(nb.vertex) && nb.multiplicity >= 2) {
        inst.infeasible = true;
        return;
      }
    }
  } else {
    // R4: two edge endpoints into the same component of G[U].
    std::vector<std::pair<VertexId, int>> hits;
    for (const auto& nb : g.neighbors(v)) {
      if (!inst.is_undeletable(nb.vertex)) continue;
      const VertexId root = inst.undeletable_components.find(nb.vertex);
      auto it = std::find_if(hits.begin(), hits.end(), [&](const auto& h) { return h.first == root; });
      if (it == hits.end()) {
        hits.emplace_back(root, nb.multiplicity);
        it = hits.end() - 1;
      } else {
        it->second += nb.multiplicity;
      }
      if (it->second >= 2) {
        inst.take_into_solution(v);
        return;
      }
    }
  }

  if (g.degree(v) == 2 && !inst.is_irreducible(v)) {
    inst.suppress(v);
    return;
  }

  if (options.double_edge_rule && g.degree(v) == 3 && g.distinct_neighbors(v) == 2) {
    const auto nbs = g.neighbors(v);
    const VertexId w = nbs[0].multiplicity == 2 ? nbs[0].vertex : nbs[1].vertex;
    if (!inst.is_undeletable(w)) inst.take_into_solution(w);
  }
}

}  // namespace

ReductionOutcome reduce_exhaustively(Instance& inst, const ReductionOptions& options) {
  const std::size_t n0 = inst.graph.num_vertices();
  const std::size_t m0 = inst.graph.num_edges();
  const std::size_t forced0 = inst.forced.size();

  std::size_t steps = 0;
  while (!inst.infeasible) {
    if (inst.budget < 0) {
      inst.infeasible = true;
      break;
    }
    if (steps >= options.step_limit) break;
    const VertexId v = inst.queue.pop();
    if (v < 0) break;
    ++steps;
    if (!inst.graph.is_alive(v)) continue;
    reduce_vertex(inst, v, options);
  }
  if (inst.budget < 0) inst.infeasible = true;

  ReductionOutcome out;
  out.forced_added = inst.forced.size() - forced0;
  out.vertices_removed = n0 - inst.graph.num_vertices();
  out.edges_removed = m0 >= inst.graph.num_edges() ? m0 - inst.graph.num_edges() : 0;
  out.infeasible = inst.infeasible;
  return out;
}

bool lower_bound_prune(const Instance& inst) {
  if (inst.budget < 0) return true;
  const MultiGraph& g = inst.graph;
  const auto n = static_cast<long long>(g.num_vertices());
  const auto m = static_cast<long long>(g.num_edges());
  if (n == 0) return false;

  std::vector<std::pair<int, VertexId>> degrees;
  for (VertexId v : g.vertices()) {
    if (!inst.is_undeletable(v)) degrees.emplace_back(g.degree(v), v);
  }
  std::sort(degrees.begin(), degrees.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });

  const long long last = std::min<long long>(inst.budget, static_cast<long long>(degrees.size()));
  long long removed_degree = 0;
  for (long long j = 0; j <= last; ++j) {
    // Deleting every vertex leaves the empty forest, which the bound does not cover.
    if (n - j <= 0) return false;
    if (m - removed_degree < n - j) return false;
    if (j < static_cast<long long>(degrees.size())) removed_degree += degrees[j].first;
  }
  return true;
}

SplitOutcome split_components(Instance& inst, const ComponentSolver& solver) {
  SplitOutcome out;
  auto comps = components(inst.graph);
  if (comps.size() <= 1) return out;
  const std::size_t keep = largest_component(comps);

  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (i == keep) continue;
    const auto& comp = comps[i];
    Instance sub = inst.extract(comp);
    std::optional<std::vector<VertexId>> solved;
    if (!sub.infeasible) solved = solver(sub, inst.budget);
    if (!solved) {
      inst.infeasible = true;
      return out;
    }
    for (VertexId local : *solved) inst.forced.push_back(comp[local]);
    inst.budget -= static_cast<int>(solved->size());
    for (VertexId v : comp) inst.graph.delete_vertex(v);
    ++out.components_separated;
    out.separated_sizes.push_back(comp.size());
    if (inst.budget < 0) {
      inst.infeasible = true;
      return out;
    }
  }
  return out;
}

}  // namespace fvs
