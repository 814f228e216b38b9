#pragma once

#include "fvs/graph.hpp"

namespace fvs {

/// What a pivot rule asks the branching loop to do next.
struct PivotAction {
  enum class Kind {
    Branch,     ///< branch on `vertex`
    Subcubic,   ///< hand the instance to the subcubic solver
    Rewritten,  ///< the instance was changed in place; reduce again
  };
  Kind kind = Kind::Branch;
  VertexId vertex = -1;

  static PivotAction branch(VertexId v) { return {Kind::Branch, v}; }
  static PivotAction subcubic() { return {Kind::Subcubic, -1}; }
  static PivotAction rewritten() { return {Kind::Rewritten, -1}; }
};

}  // namespace fvs
