#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "fvs/instance.hpp"

namespace fvs {

struct ReductionOutcome {
  std::size_t forced_added = 0;
  std::size_t vertices_removed = 0;
  std::size_t edges_removed = 0;
  bool infeasible = false;
};

struct ReductionOptions {
  /// Rule 6 (single edge + double edge forces the double-edge neighbor).
  /// The ILP preprocessing runs rules 2-5 only.
  bool double_edge_rule = true;
  /// Stop after this many queue entries; used to test rule prefixes.
  std::size_t step_limit = std::numeric_limits<std::size_t>::max();
};

/// Drains inst.queue, applying the simple rules until none fires:
///   R1  budget < 0 or G[U] cyclic: infeasible
///   R2  degree <= 1: delete
///   R3  multiplicity > 2: cap at 2
///   R4  self-loop, or >= 2 edges into one component of G[U]: force
///   R5  degree 2 and not irreducible: suppress
///   R6  exactly one single and one double neighbor: force the double one
ReductionOutcome reduce_exhaustively(Instance& inst, const ReductionOptions& options = {});

/// Degree-sum lower bound test. True means no solution of size <= budget
/// exists and the branch can be cut.
[[nodiscard]] bool lower_bound_prune(const Instance& inst);

/// Minimum solution of a (sub-)instance within the given budget, or nothing
/// when none exists. Returned ids are in the instance's own id space.
using ComponentSolver = std::function<std::optional<std::vector<VertexId>>(const Instance&, int max_budget)>;

struct SplitOutcome {
  std::size_t components_separated = 0;
  std::vector<std::size_t> separated_sizes;
};

/// Solves every connected component except the largest with `solver`,
/// appends their solutions to inst.forced and removes them from the graph.
/// The remaining budget shrinks accordingly; inst.infeasible is set when the
/// components cannot be solved within it.
SplitOutcome split_components(Instance& inst, const ComponentSolver& solver);

}  // namespace fvs
