#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fvs {

using VertexId = std::int32_t;

/// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Neighbor {
  VertexId vertex;
  int multiplicity;
};

/// Undirected multigraph over a stable, dense id space.
///
/// Deleted vertices keep their id slot, so ids held elsewhere stay valid.
/// Self-loops are a per-vertex flag contributing 2 to the degree and 1 to the
/// edge count; they never appear in adjacency lists. Adjacency entries do not
/// carry back-pointers, which keeps copies cheap at branch nodes.
class MultiGraph {
 public:
  MultiGraph() = default;
  explicit MultiGraph(std::size_t n);

  VertexId add_vertex();
  VertexId add_vertex(std::string label);

  /// Adds `multiplicity` parallel copies of uv (a self-loop when u == v).
  void add_edge(VertexId u, VertexId v, int multiplicity = 1);
  /// Removes every parallel copy of uv; returns the removed multiplicity.
  int remove_edge(VertexId u, VertexId v);
  /// Lowers the multiplicity of uv by one.
  void remove_edge_copy(VertexId u, VertexId v);
  void set_loop(VertexId v, bool loop);

  void delete_vertex(VertexId v);
  /// Replaces degree-2 vertex v by an edge between its two neighbors, or by a
  /// self-loop when both edge endpoints lead to the same neighbor. The merged
  /// multiplicity is capped at `multiplicity_cap`. Returns the neighbor pair.
  std::pair<VertexId, VertexId> suppress_vertex(VertexId v, int multiplicity_cap = 2);

  /// Caps every multiplicity at v to `cap`; returns the number of removed
  /// edge copies.
  int cap_multiplicities(VertexId v, int cap = 2);

  [[nodiscard]] bool is_alive(VertexId v) const {
    return v >= 0 && static_cast<std::size_t>(v) < alive_.size() && alive_[v];
  }
  [[nodiscard]] int degree(VertexId v) const { return degree_[v]; }
  [[nodiscard]] bool has_loop(VertexId v) const { return loop_[v]; }
  [[nodiscard]] std::span<const Neighbor> neighbors(VertexId v) const { return adj_[v]; }
  [[nodiscard]] int multiplicity(VertexId u, VertexId v) const;
  [[nodiscard]] std::size_t distinct_neighbors(VertexId v) const { return adj_[v].size(); }

  [[nodiscard]] std::size_t num_vertices() const { return n_live_; }
  [[nodiscard]] std::size_t num_edges() const { return m_live_; }
  /// Size of the id space, including deleted slots.
  [[nodiscard]] std::size_t capacity() const { return alive_.size(); }
  [[nodiscard]] bool empty() const { return n_live_ == 0; }

  /// Live vertex ids in ascending order.
  [[nodiscard]] std::vector<VertexId> vertices() const;

  /// Original label, or a synthetic "_<id>" for vertices created without one.
  [[nodiscard]] std::string label(VertexId v) const;

  /// Induced subgraph on `keep` with dense ids 0..keep.size()-1 in the given
  /// order. Labels are carried over.
  [[nodiscard]] MultiGraph induced_subgraph(std::span<const VertexId> keep) const;

  /// Full recount of adjacency symmetry, degrees and live counters.
  [[nodiscard]] bool audit() const;

 private:
  void check_alive(VertexId v, const char* what) const;
  void add_half_edge(VertexId u, VertexId v, int multiplicity);
  int remove_half_edge(VertexId u, VertexId v);

  std::vector<std::vector<Neighbor>> adj_;
  std::vector<int> degree_;
  std::vector<char> loop_;
  std::vector<char> alive_;
  std::size_t n_live_ = 0;
  std::size_t m_live_ = 0;
  // Shared between copies; only the parser and explicit relabels write it.
  std::shared_ptr<std::vector<std::string>> labels_;
};

/// True iff the graph (or the subgraph induced by `restrict_to`) is a forest.
/// Loops and parallel edges inside the restriction count as cycles.
[[nodiscard]] bool is_acyclic(const MultiGraph& g,
                              std::optional<std::span<const VertexId>> restrict_to = std::nullopt);

/// True iff g - x is a forest.
[[nodiscard]] bool verify_solution(const MultiGraph& g, std::span<const VertexId> x);

/// Connected components of the live vertices, each sorted ascending, listed
/// by smallest member.
[[nodiscard]] std::vector<std::vector<VertexId>> components(const MultiGraph& g);

/// Index into `comps` of the component with most vertices; first one on ties.
[[nodiscard]] std::size_t largest_component(const std::vector<std::vector<VertexId>>& comps);

struct Solution {
  std::vector<VertexId> vertices;
  [[nodiscard]] std::size_t size() const { return vertices.size(); }
};

}  // namespace fvs
