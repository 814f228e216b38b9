#pragma once

#include <chrono>
#include <functional>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fvs/graph.hpp"

namespace fvs {

/// sum of x_v over `vertices` >= 1; vertices sorted.
struct CycleConstraint {
  std::vector<VertexId> vertices;
  friend bool operator==(const CycleConstraint&, const CycleConstraint&) = default;
  friend auto operator<=>(const CycleConstraint&, const CycleConstraint&) = default;
};

/// For every vertex a shortest cycle through it, deduplicated by vertex set
/// and listed in order of first discovery.
[[nodiscard]] std::vector<CycleConstraint> shortest_cycles(const MultiGraph& g);

/// Covering program  min sum x  s.t. every row has a 1, x binary.
/// Variables are 0..num_variables-1; rows hold sorted variable indices.
struct IlpModel {
  int num_variables = 0;
  std::vector<std::vector<int>> rows;
  /// Feasible starting assignment (may be empty).
  std::vector<char> warm_start;
};

class IlpError : public std::runtime_error {
 public:
  IlpError(const std::string& what, Solution incumbent)
      : std::runtime_error(what), incumbent_(std::move(incumbent)) {}
  [[nodiscard]] const Solution& incumbent() const { return incumbent_; }

 private:
  Solution incumbent_;
};

/// Returns an optimal 0/1 assignment of the model, or throws
/// std::runtime_error.
using IlpBackend = std::function<std::vector<char>(const IlpModel&)>;

inline constexpr int kBuiltinVariableCap = 64;

/// Exact branch and bound over bit masks, seeded with the warm start. Throws
/// std::length_error beyond `variable_cap` variables (use an external
/// solver then).
[[nodiscard]] std::vector<char> builtin_solve(const IlpModel& model, int variable_cap = kBuiltinVariableCap);
[[nodiscard]] IlpBackend builtin_backend(int variable_cap = kBuiltinVariableCap);

/// CPLEX LP text: Minimize / Subject To / Binary / End, variables x0, x1, ...
void write_lp_model(std::ostream& out, const IlpModel& model);
[[nodiscard]] IlpModel read_lp_model(std::istream& in);
/// "x<i>=<value>" lines; variables not listed are 0.
void write_assignment(std::ostream& out, const std::vector<char>& x);
[[nodiscard]] std::vector<char> read_assignment(std::istream& in, int num_variables);

/// Runs `<command> <model.lp> <assignment.txt> <start.txt>` in a scratch
/// directory and parses the assignment it writes.
[[nodiscard]] IlpBackend external_backend(std::string command);

/// Environment variable naming the external solver command.
inline constexpr const char* kIlpCommandVariable = "FVS_ILP_COMMAND";

struct IlpStats {
  std::size_t bridges_removed = 0;
  std::size_t components = 0;
  std::size_t rounds = 0;
  /// Pool size and model optimum after each solve, over all components.
  std::vector<std::size_t> pool_sizes;
  std::vector<std::size_t> objectives;
  /// Lazy rounds spent on each component, in solve order.
  std::vector<std::size_t> component_rounds;
};

struct IlpOptions {
  IlpBackend backend;  ///< builtin when empty
  std::chrono::milliseconds time_limit{30 * 60 * 1000};
};

struct IlpResult {
  Solution solution;
  IlpStats stats;
};

/// Reductions 2-5, bridge removal, then per component a lazy cycle-constraint
/// loop until the backend's answer is acyclic. Throws IlpError carrying the
/// heuristic solution when the backend fails or time runs out.
[[nodiscard]] IlpResult solve_ilp(const MultiGraph& g, const IlpOptions& options = {});

/// Edges whose removal disconnects their component; parallel edges never
/// qualify.
[[nodiscard]] std::vector<std::pair<VertexId, VertexId>> bridges(const MultiGraph& g);

}  // namespace fvs
