#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fvs/instance.hpp"
#include "fvs/pivot.hpp"

namespace fvs {

enum class HalfValue : std::uint8_t { Zero = 0, Half = 1, One = 2 };

/// Vertex values of the rooted relaxation, indexed by id (dead vertices and
/// the root read Zero).
struct HalfIntegralAssignment {
  std::vector<HalfValue> values;
  /// Sum of values times two, so it stays integral.
  int doubled_total = 0;
  /// Tree of zero-valued vertices around the root. Every neighbour of the
  /// region is valued 1/2 (one edge into it) or 1 (several edges).
  std::vector<VertexId> zero_region;
  /// Optimum of the linear program the assignment was checked against.
  double lp_value = 0.0;

  [[nodiscard]] double total() const { return doubled_total / 2.0; }
  [[nodiscard]] double value(VertexId v) const { return static_cast<int>(values[v]) / 2.0; }
};

/// Rooted problem: find a minimum X, avoiding the root and every vertex
/// flagged in `undeletable`, such that the root's component of G - X is a
/// tree.
struct RootedProblem {
  const MultiGraph& graph;
  VertexId root;
  std::span<const char> undeletable = {};
};

/// Exhaustive rooted optimum; needs at most 20 live vertices. Nothing when
/// the undeletable vertices already close a cycle around the root.
[[nodiscard]] std::optional<Solution> rooted_integral_bruteforce(const RootedProblem& p);

/// Optimum of the relaxation
///   min sum x_v  s.t.  x(W) >= 1 for every closed walk W from the root that
///   does not collapse by backtracking,
/// where x(W) counts every visit. Vertices in `zero` (and the root) are fixed
/// to 0. Solved by column generation on the dual packing program; violated
/// walks are found as a shortest stem plus a shortest cycle at its end.
struct RelaxationLp {
  double value = 0.0;
  std::vector<double> x;  ///< indexed by id
};
[[nodiscard]] RelaxationLp solve_relaxation_lp(const MultiGraph& g, VertexId root, std::span<const char> zero);

/// Half-integral optimum of the rooted relaxation with the largest zero
/// region around the root. Undeletable vertices are fixed to 0. Throws
/// std::logic_error if no half-integral assignment matches the LP optimum.
[[nodiscard]] HalfIntegralAssignment solve_relaxation(const RootedProblem& p);

/// Undeletable vertex in the largest component of G[U] (smallest id on
/// ties), or -1 when U is empty.
[[nodiscard]] VertexId choose_relaxation_root(Instance& inst);

/// One step of the half-integral strategy. With U empty it branches on a
/// maximum-degree vertex. Otherwise it solves the relaxation at the root:
/// vertices valued 1 are deleted and the zero region joins U (returns
/// Rewritten); if neither applies, every neighbour of the root's U-component
/// is valued 1/2 and the highest-degree one is the branching vertex.
[[nodiscard]] PivotAction ii_step(Instance& inst);

}  // namespace fvs
