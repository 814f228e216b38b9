#include "fvs/subcubic.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "fvs/reduce.hpp"

namespace fvs {

namespace {

constexpr std::uint64_t kPrime = (1ULL << 61) - 1;

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t s = a + b;
  return s >= kPrime ? s - kPrime : s;
}

std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kPrime - b; }

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(p & kPrime);
  std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
  return add_mod(lo, hi);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t result = 1;
  while (exp) {
    if (exp & 1U) result = mul_mod(result, base);
    base = mul_mod(base, base);
    exp >>= 1U;
  }
  return result;
}

class ClassSets {
 public:
  explicit ClassSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<int> parent_;
};

// Pairs of one connected component of the pair-edge graph, re-indexed
// densely over the classes they touch.
struct ParityBlock {
  int dimension = 0;
  std::vector<std::size_t> pair_index;
  std::vector<ParityEdge> first;
  std::vector<ParityEdge> second;
};

class SkewRank {
 public:
  SkewRank(const ParityBlock& block, std::mt19937_64& rng) : block_(block), weight_(block.pair_index.size()) {
    std::uniform_int_distribution<std::uint64_t> dist(1, kPrime - 1);
    for (auto& w : weight_) w = dist(rng);
  }

  int rank(const std::vector<char>& active) const {
    const auto n = static_cast<std::size_t>(block_.dimension);
    std::vector<std::uint64_t> m(n * n, 0);
    auto at = [&](int r, int c) -> std::uint64_t& { return m[static_cast<std::size_t>(r) * n + c]; };
    for (std::size_t i = 0; i < weight_.size(); ++i) {
      if (!active[i]) continue;
      const std::uint64_t x = weight_[i];
      const auto [a1, b1] = block_.first[i];
      const auto [a2, b2] = block_.second[i];
      // x * (b c^T - c b^T) with b = e_a1 - e_b1, c = e_a2 - e_b2.
      at(a1, a2) = add_mod(at(a1, a2), x);
      at(a1, b2) = sub_mod(at(a1, b2), x);
      at(b1, a2) = sub_mod(at(b1, a2), x);
      at(b1, b2) = add_mod(at(b1, b2), x);
      at(a2, a1) = sub_mod(at(a2, a1), x);
      at(b2, a1) = add_mod(at(b2, a1), x);
      at(a2, b1) = add_mod(at(a2, b1), x);
      at(b2, b1) = sub_mod(at(b2, b1), x);
    }
    int rank = 0;
    for (std::size_t col = 0; col < n && static_cast<std::size_t>(rank) < n; ++col) {
      std::size_t pivot = static_cast<std::size_t>(rank);
      while (pivot < n && m[pivot * n + col] == 0) ++pivot;
      if (pivot == n) continue;
      const auto r = static_cast<std::size_t>(rank);
      if (pivot != r) {
        for (std::size_t c = 0; c < n; ++c) std::swap(m[pivot * n + c], m[r * n + c]);
      }
      const std::uint64_t inv = pow_mod(m[r * n + col], kPrime - 2);
      for (std::size_t row = r + 1; row < n; ++row) {
        const std::uint64_t f = m[row * n + col];
        if (f == 0) continue;
        const std::uint64_t scale = mul_mod(f, inv);
        for (std::size_t c = col; c < n; ++c) {
          m[row * n + c] = sub_mod(m[row * n + c], mul_mod(scale, m[r * n + c]));
        }
      }
      ++rank;
    }
    return rank;
  }

 private:
  const ParityBlock& block_;
  std::vector<std::uint64_t> weight_;
};

// Deletes every pair of [lo, hi) that is not needed to keep the rank.
void prune_pairs(const SkewRank& oracle, std::vector<char>& active, std::size_t lo, std::size_t hi, int target) {
  std::vector<std::size_t> switched;
  for (std::size_t i = lo; i < hi; ++i) {
    if (active[i]) {
      active[i] = 0;
      switched.push_back(i);
    }
  }
  if (switched.empty()) return;
  if (oracle.rank(active) == target) return;
  for (std::size_t i : switched) active[i] = 1;
  if (hi - lo == 1) return;
  const std::size_t mid = lo + (hi - lo) / 2;
  prune_pairs(oracle, active, lo, mid, target);
  prune_pairs(oracle, active, mid, hi, target);
}

std::vector<ParityBlock> split_blocks(const MatroidParityInstance& mpi) {
  ClassSets sets(static_cast<std::size_t>(mpi.num_classes));
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < mpi.pairs.size(); ++i) {
    const auto& p = mpi.pairs[i];
    // A pair with a contracted loop can never be part of a forest.
    if (p.first.a == p.first.b || p.second.a == p.second.b) continue;
    sets.unite(p.first.a, p.first.b);
    sets.unite(p.second.a, p.second.b);
    sets.unite(p.first.a, p.second.a);
    usable.push_back(i);
  }
  std::vector<int> block_of(static_cast<std::size_t>(mpi.num_classes), -1);
  std::vector<ParityBlock> blocks;
  std::vector<std::vector<int>> local(static_cast<std::size_t>(mpi.num_classes));
  std::vector<int> local_index(static_cast<std::size_t>(mpi.num_classes), -1);
  for (std::size_t i : usable) {
    const auto& p = mpi.pairs[i];
    const int root = sets.find(p.first.a);
    if (block_of[root] < 0) {
      block_of[root] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    ParityBlock& block = blocks[block_of[root]];
    auto index = [&](int cls) {
      if (local_index[cls] < 0) local_index[cls] = block.dimension++;
      return local_index[cls];
    };
    block.pair_index.push_back(i);
    block.first.push_back({index(p.first.a), index(p.first.b)});
    block.second.push_back({index(p.second.a), index(p.second.b)});
  }
  return blocks;
}

bool independent(const MatroidParityInstance& mpi, const std::vector<char>& chosen) {
  ClassSets sets(static_cast<std::size_t>(mpi.num_classes));
  for (std::size_t i = 0; i < mpi.pairs.size(); ++i) {
    if (!chosen[i]) continue;
    const auto& p = mpi.pairs[i];
    if (!sets.unite(p.first.a, p.first.b) || !sets.unite(p.second.a, p.second.b)) return false;
  }
  return true;
}

bool locally_maximal(const MatroidParityInstance& mpi, std::vector<char> chosen) {
  for (std::size_t i = 0; i < mpi.pairs.size(); ++i) {
    if (chosen[i]) continue;
    chosen[i] = 1;
    if (independent(mpi, chosen)) return false;
    chosen[i] = 0;
  }
  return true;
}

}  // namespace

bool is_subcubic(const Instance& inst) {
  for (VertexId v : inst.graph.vertices()) {
    if (!inst.is_undeletable(v) && inst.graph.degree(v) > 3) return false;
  }
  return true;
}

MatroidParityInstance reduce_to_parity(const Instance& inst) {
  const MultiGraph& g = inst.graph;
  MatroidParityInstance mpi;
  mpi.original_capacity = g.capacity();

  // Subdivided graph as an edge list; new vertices are appended after the
  // original id space and are undeletable.
  std::vector<std::pair<VertexId, VertexId>> edges;
  auto next_id = static_cast<VertexId>(g.capacity());
  for (VertexId v : g.vertices()) {
    if (g.has_loop(v)) throw ContractViolation("reduce_to_parity: instance still has a self-loop");
    std::vector<Neighbor> later;
    for (const auto& nb : g.neighbors(v)) {
      if (nb.vertex > v) later.push_back(nb);
    }
    std::sort(later.begin(), later.end(), [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
    for (const auto& nb : later) {
      for (int copy = 0; copy < nb.multiplicity; ++copy) {
        if (!inst.is_undeletable(v) && !inst.is_undeletable(nb.vertex)) {
          const VertexId x = next_id++;
          edges.emplace_back(v, x);
          edges.emplace_back(x, nb.vertex);
        } else {
          edges.emplace_back(v, nb.vertex);
        }
      }
    }
  }
  mpi.subdivision_vertices = static_cast<std::size_t>(next_id) - g.capacity();

  const auto total = static_cast<std::size_t>(next_id);
  std::vector<std::vector<std::size_t>> incident(total);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    incident[edges[e].first].push_back(e);
    incident[edges[e].second].push_back(e);
  }

  std::vector<char> in_pair(edges.size(), 0);
  std::vector<std::pair<VertexId, std::pair<std::size_t, std::size_t>>> raw_pairs;
  for (VertexId v : g.vertices()) {
    if (inst.is_undeletable(v)) continue;
    auto& inc = incident[v];
    if (inc.size() != 3) {
      throw ContractViolation("reduce_to_parity: deletable vertex " + std::to_string(v) + " has degree " +
                              std::to_string(inc.size()) + ", expected 3");
    }
    std::sort(inc.begin(), inc.end());
    in_pair[inc[0]] = 1;
    in_pair[inc[1]] = 1;
    raw_pairs.push_back({v, {inc[0], inc[1]}});
  }

  ClassSets sets(total);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (in_pair[e]) continue;
    mpi.committed.push_back(edges[e]);
    if (!sets.unite(edges[e].first, edges[e].second)) {
      throw ContractViolation("reduce_to_parity: committed edges contain a cycle (G[U] is not a forest)");
    }
  }

  std::vector<int> class_index(total, -1);
  auto cls = [&](VertexId v) {
    const int root = sets.find(v);
    if (class_index[root] < 0) class_index[root] = mpi.num_classes++;
    return class_index[root];
  };
  for (const auto& [owner, pair] : raw_pairs) {
    const auto& e1 = edges[pair.first];
    const auto& e2 = edges[pair.second];
    mpi.pairs.push_back({owner, {cls(e1.first), cls(e1.second)}, {cls(e2.first), cls(e2.second)}});
  }
  return mpi;
}

std::vector<VertexId> graphic_matroid_parity(const MatroidParityInstance& mpi, std::uint64_t seed) {
  const auto blocks = split_blocks(mpi);
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 4; ++attempt) {
    std::vector<char> chosen(mpi.pairs.size(), 0);
    for (const auto& block : blocks) {
      SkewRank oracle(block, rng);
      std::vector<char> active(block.pair_index.size(), 1);
      const int target = oracle.rank(active);
      prune_pairs(oracle, active, 0, active.size(), target);
      for (std::size_t i = 0; i < active.size(); ++i) {
        if (active[i]) chosen[block.pair_index[i]] = 1;
      }
    }
    if (independent(mpi, chosen) && locally_maximal(mpi, chosen)) {
      std::vector<VertexId> owners;
      for (std::size_t i = 0; i < chosen.size(); ++i) {
        if (chosen[i]) owners.push_back(mpi.pairs[i].owner);
      }
      std::sort(owners.begin(), owners.end());
      return owners;
    }
  }
  throw std::runtime_error("graphic_matroid_parity: randomized rank certificate failed repeatedly");
}

std::optional<Solution> solve_subcubic(const Instance& inst) {
  if (!is_subcubic(inst)) throw ContractViolation("solve_subcubic: a deletable vertex has degree > 3");
  Instance work = inst;
  work.budget = kUnlimitedBudget;
  work.forced.clear();
  work.enqueue_all();
  reduce_exhaustively(work);
  if (work.infeasible) return std::nullopt;

  Solution out{std::move(work.forced)};
  if (work.graph.empty()) return out;

  const auto mpi = reduce_to_parity(work);
  const auto kept = graphic_matroid_parity(mpi);
  for (VertexId v : work.graph.vertices()) {
    if (!work.is_undeletable(v) && !std::binary_search(kept.begin(), kept.end(), v)) out.vertices.push_back(v);
  }
  return out;
}

}  // namespace fvs
