#pragma once

#include <deque>
#include <limits>
#include <span>
#include <vector>

#include "fvs/graph.hpp"

namespace fvs {

/// Budget used where the caller wants reductions without a size limit.
inline constexpr int kUnlimitedBudget = std::numeric_limits<int>::max() / 4;

/// Union-find over the whole id space; only entries of undeletable vertices
/// are meaningful. Reductions never split a component of G[U], so the
/// structure stays exact without deletions.
class UnionFind {
 public:
  UnionFind() = default;
  explicit UnionFind(std::size_t n);

  void grow(std::size_t n);
  VertexId find(VertexId x);
  /// Returns false when a and b were already joined.
  bool unite(VertexId a, VertexId b);

 private:
  std::vector<VertexId> parent_;
};

/// Deduplicated FIFO of vertices awaiting a reduction check.
class ReductionQueue {
 public:
  void push(VertexId v);
  /// Pops the next entry; returns -1 when empty.
  VertexId pop();
  [[nodiscard]] bool empty() const { return pending_.empty(); }
  [[nodiscard]] std::size_t size() const { return pending_.size(); }
  void clear();

 private:
  std::deque<VertexId> pending_;
  std::vector<char> queued_;
};

/// A branch-node state: (G, U, k) plus forced vertices.
///
/// Every mutation that can make a reduction rule applicable pushes the
/// affected vertices onto `queue`.
struct Instance {
  MultiGraph graph;
  std::vector<char> undeletable;
  std::vector<char> irreducible;
  UnionFind undeletable_components;
  int budget = 0;
  std::vector<VertexId> forced;
  bool infeasible = false;
  ReductionQueue queue;

  Instance() = default;
  /// Wraps g with U = empty; every vertex is queued for reduction.
  Instance(MultiGraph g, int budget);

  [[nodiscard]] bool is_undeletable(VertexId v) const { return undeletable[v] != 0; }
  [[nodiscard]] bool is_irreducible(VertexId v) const { return irreducible[v] != 0; }
  [[nodiscard]] bool has_undeletable() const;

  /// Creates a fresh vertex. Undeletable vertices get their own G[U] class.
  VertexId add_vertex(bool make_undeletable, bool make_irreducible);

  /// Deletes v into the solution and spends one unit of budget.
  void take_into_solution(VertexId v);
  /// Deletes v without adding it to the solution (degree <= 1 removals).
  void discard_vertex(VertexId v);
  /// Moves v into U. Marks the instance infeasible when this closes a cycle
  /// inside G[U].
  void make_undeletable(VertexId v);
  /// Suppresses degree-2 vertex v, keeping the G[U] classes in sync.
  void suppress(VertexId v);
  /// Subdivides the single edge uv with a new undeletable, irreducible vertex.
  VertexId subdivide_with_gadget(VertexId u, VertexId v);

  void enqueue_neighbors(VertexId v);
  void enqueue_all();

  /// Instance on the induced subgraph of `keep` (dense ids in `keep` order),
  /// with U and irreducible flags carried over and an empty queue.
  [[nodiscard]] Instance extract(std::span<const VertexId> keep) const;
};

}  // namespace fvs
