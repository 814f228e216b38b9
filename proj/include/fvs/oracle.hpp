#pragma once

#include <optional>
#include <span>

#include "fvs/graph.hpp"

namespace fvs {

inline constexpr std::size_t kBruteForceLimit = 20;

/// Exhaustive minimum feedback vertex set: subsets are tried in increasing
/// size, so the first hit is optimal. Vertices flagged in `forbidden`
/// (indexed by id) may not be chosen; returns nothing when no admissible
/// solution exists. Requires at most 20 live vertices.
///
/// Deliberately shares no code with the solvers it is used to check.
[[nodiscard]] std::optional<Solution> min_fvs_bruteforce(const MultiGraph& g,
                                                          std::span<const char> forbidden = {});

}  // namespace fvs
