#include "fvs/oracle.hpp"

#include <cstdint>
#include <numeric>
#include <vector>

namespace fvs {

namespace {

struct CompactEdges {
  std::vector<std::pair<int, int>> simple;
  std::uint32_t cyclic_alone = 0;  // vertices with a loop
  std::vector<std::pair<int, int>> doubled;
};

bool forest_after_removal(const CompactEdges& edges, std::size_t n, std::uint32_t removed) {
  if (edges.cyclic_alone & ~removed) return false;
  for (const auto& [a, b] : edges.doubled) {
    if (!((removed >> a) & 1U) && !((removed >> b) & 1U)) return false;
  }
  int parent[kBruteForceLimit];
  std::iota(parent, parent + n, 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [a, b] : edges.simple) {
    if (((removed >> a) & 1U) || ((removed >> b) & 1U)) continue;
    const int ra = find(a);
    const int rb = find(b);
    if (ra == rb) return false;
    parent[ra] = rb;
  }
  return true;
}

}  // namespace

std::optional<Solution> min_fvs_bruteforce(const MultiGraph& g, std::span<const char> forbidden) {
  const auto live = g.vertices();
  if (live.size() > kBruteForceLimit) {
    throw ContractViolation("min_fvs_bruteforce: more than 20 vertices");
  }
  const std::size_t n = live.size();
  std::vector<int> index(g.capacity(), -1);
  for (std::size_t i = 0; i < n; ++i) index[live[i]] = static_cast<int>(i);

  CompactEdges edges;
  for (std::size_t i = 0; i < n; ++i) {
    const VertexId v = live[i];
    if (g.has_loop(v)) edges.cyclic_alone |= 1U << i;
    for (const auto& nb : g.neighbors(v)) {
      const int j = index[nb.vertex];
      if (j <= static_cast<int>(i)) continue;
      if (nb.multiplicity >= 2) edges.doubled.emplace_back(static_cast<int>(i), j);
      edges.simple.emplace_back(static_cast<int>(i), j);
    }
  }

  std::vector<int> allowed;
  for (std::size_t i = 0; i < n; ++i) {
    const VertexId v = live[i];
    const bool banned = static_cast<std::size_t>(v) < forbidden.size() && forbidden[v];
    if (!banned) allowed.push_back(static_cast<int>(i));
  }
  const std::size_t a = allowed.size();

  for (std::size_t size = 0; size <= a; ++size) {
    // Gosper's hack over subsets of the allowed positions.
    std::uint32_t pick = size == 0 ? 0 : (1U << size) - 1;
    const std::uint32_t limit = 1U << a;
    while (pick < limit) {
      std::uint32_t removed = 0;
      for (std::size_t t = 0; t < a; ++t) {
        if ((pick >> t) & 1U) removed |= 1U << allowed[t];
      }
      if (forest_after_removal(edges, n, removed)) {
        Solution sol;
        for (std::size_t i = 0; i < n; ++i) {
          if ((removed >> i) & 1U) sol.vertices.push_back(live[i]);
        }
        return sol;
      }
      if (pick == 0) break;
      const std::uint32_t low = pick & (~pick + 1);
      const std::uint32_t ripple = pick + low;
      pick = (((ripple ^ pick) >> 2) / low) | ripple;
    }
  }
  return std::nullopt;
}

}  // namespace fvs
