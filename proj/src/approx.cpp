#include "fvs/approx.hpp"

#include <algorithm>
#include <limits>

#include "fvs/instance.hpp"
#include "fvs/reduce.hpp"

namespace fvs {

namespace {

VertexId max_degree_vertex(const MultiGraph& g, std::span<const VertexId> candidates) {
  VertexId best = -1;
  for (VertexId v : candidates) {
    if (best < 0 || g.degree(v) > g.degree(best) || (g.degree(v) == g.degree(best) && v < best)) best = v;
  }
  return best;
}

// Vertices that survive repeated removal of degree <= 1 vertices.
std::vector<char> two_core(const MultiGraph& g) {
  std::vector<char> in_core(g.capacity(), 0);
  std::vector<int> deg(g.capacity(), 0);
  std::vector<VertexId> stack;
  for (VertexId v : g.vertices()) {
    in_core[v] = 1;
    deg[v] = g.degree(v);
    if (deg[v] <= 1) stack.push_back(v);
  }
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    if (!in_core[v]) continue;
    in_core[v] = 0;
    for (const auto& nb : g.neighbors(v)) {
      if (!in_core[nb.vertex]) continue;
      deg[nb.vertex] -= nb.multiplicity;
      if (deg[nb.vertex] <= 1) stack.push_back(nb.vertex);
    }
  }
  return in_core;
}

}  // namespace

Solution approximate(const MultiGraph& g) {
  Instance inst(g, kUnlimitedBudget);
  while (true) {
    reduce_exhaustively(inst);
    if (inst.graph.empty()) break;
    const auto live = inst.graph.vertices();
    inst.take_into_solution(max_degree_vertex(inst.graph, live));
  }
  return Solution{std::move(inst.forced)};
}

std::vector<VertexId> shortest_cycle_through(const MultiGraph& g, VertexId v) {
  if (!g.is_alive(v)) throw ContractViolation("shortest_cycle_through: vertex is not live");
  if (g.has_loop(v)) return {v};

  VertexId doubled = -1;
  for (const auto& nb : g.neighbors(v)) {
    if (nb.multiplicity >= 2 && (doubled < 0 || nb.vertex < doubled)) doubled = nb.vertex;
  }
  if (doubled >= 0) return {v, doubled};

  const std::size_t n = g.capacity();
  std::vector<int> dist(n, -1);
  std::vector<VertexId> parent(n, -1);
  std::vector<VertexId> branch(n, -1);
  std::vector<VertexId> order;
  dist[v] = 0;
  order.push_back(v);

  int best = std::numeric_limits<int>::max();
  VertexId best_x = -1;
  VertexId best_y = -1;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const VertexId x = order[head];
    if (2 * dist[x] + 1 >= best) break;
    for (const auto& nb : g.neighbors(x)) {
      const VertexId y = nb.vertex;
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        parent[y] = x;
        branch[y] = x == v ? y : branch[x];
        order.push_back(y);
      } else if (y != v && x != v && branch[y] != branch[x]) {
        const int len = dist[x] + dist[y] + 1;
        if (len < best) {
          best = len;
          best_x = x;
          best_y = y;
        }
      }
    }
  }
  if (best_x < 0) return {};

  std::vector<VertexId> cycle;
  for (VertexId a = best_x; a != v; a = parent[a]) cycle.push_back(a);
  cycle.push_back(v);
  std::reverse(cycle.begin(), cycle.end());
  std::vector<VertexId> tail;
  for (VertexId b = best_y; b != v; b = parent[b]) tail.push_back(b);
  cycle.insert(cycle.end(), tail.begin(), tail.end());
  return cycle;
}

std::vector<VertexId> shortest_cycle(const MultiGraph& g) {
  const auto core = two_core(g);
  std::vector<VertexId> best;
  for (VertexId v : g.vertices()) {
    if (!core[v]) continue;
    auto cycle = shortest_cycle_through(g, v);
    if (!cycle.empty() && (best.empty() || cycle.size() < best.size())) {
      best = std::move(cycle);
      if (best.size() == 1) break;
    }
  }
  return best;
}

Solution shortest_cycle_warm_start(const MultiGraph& g) {
  MultiGraph work = g;
  Solution out;
  while (true) {
    const auto cycle = shortest_cycle(work);
    if (cycle.empty()) break;
    const VertexId v = max_degree_vertex(work, cycle);
    work.delete_vertex(v);
    out.vertices.push_back(v);
  }
  return out;
}

}  // namespace fvs
