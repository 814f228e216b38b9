#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fvs/instance.hpp"

namespace fvs {

/// Edge of the contracted graph G/Q, as a pair of class indices.
struct ParityEdge {
  int a;
  int b;
};

/// The pair P_v: two of the three edges at deletable vertex v.
struct ParityPair {
  VertexId owner;
  ParityEdge first;
  ParityEdge second;
};

/// Graphic matroid parity problem built from a subcubic instance.
///
/// Vertices of the base graph are the classes of the subdivided graph with
/// the committed edges Q contracted. Q holds every edge not in a pair; each
/// deletable vertex contributes exactly one edge to it.
struct MatroidParityInstance {
  int num_classes = 0;
  std::vector<ParityPair> pairs;
  /// Q over the subdivided graph; ids >= `original_capacity` are the
  /// subdivision vertices.
  std::vector<std::pair<VertexId, VertexId>> committed;
  std::size_t original_capacity = 0;
  std::size_t subdivision_vertices = 0;
};

/// Builds the parity problem. Requires a reduced instance in which every
/// deletable vertex has degree exactly 3 and G[U] is a forest.
[[nodiscard]] MatroidParityInstance reduce_to_parity(const Instance& inst);

/// Owners of a maximum set of pairs whose union is a forest in the base
/// graph.
///
/// The matching number is the half-rank of a random evaluation of Lovász's
/// skew-symmetric matrix over GF(2^61 - 1); a maximum pair set is extracted
/// by deleting pairs whose removal keeps the rank. The result is checked to
/// be independent and locally maximal, and recomputed with a fresh seed if
/// a check fails.
[[nodiscard]] std::vector<VertexId> graphic_matroid_parity(const MatroidParityInstance& mpi,
                                                          std::uint64_t seed = 0x5eed5eedULL);

/// Minimum solution (ignoring the budget) of an instance whose deletable
/// vertices all have degree <= 3; nothing when G[U] forces infeasibility.
[[nodiscard]] std::optional<Solution> solve_subcubic(const Instance& inst);

/// True iff every live deletable vertex has degree <= 3.
[[nodiscard]] bool is_subcubic(const Instance& inst);

}  // namespace fvs
