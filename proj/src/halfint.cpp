#include "fvs/halfint.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>

namespace fvs {

namespace {

constexpr double kEps = 1e-9;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

// A closed walk from the root, stored as visit counts per vertex.
using Walk = std::vector<std::pair<VertexId, int>>;

// Primal simplex for  max 1^T y  s.t.  A y <= 1, y >= 0  with an explicit
// basis inverse. Columns can be appended between solves. Bland's rule keeps
// the highly degenerate packing programs from cycling.
class PackingSimplex {
 public:
  explicit PackingSimplex(int rows)
      : rows_(rows),
        basis_inverse_(static_cast<std::size_t>(rows) * rows, 0.0),
        basic_value_(static_cast<std::size_t>(rows), 1.0),
        basis_(static_cast<std::size_t>(rows)) {
    for (int r = 0; r < rows_; ++r) {
      basis_inverse_[index(r, r)] = 1.0;
      basis_[r] = slack(r);
    }
  }

  void add_column(std::vector<std::pair<int, double>> entries) {
    columns_.push_back(std::move(entries));
    column_basic_.push_back(0);
  }

  void optimize() {
    std::vector<double> price(static_cast<std::size_t>(rows_));
    std::vector<double> direction(static_cast<std::size_t>(rows_));
    for (int iteration = 0;; ++iteration) {
      if (iteration > 200000) throw std::runtime_error("relaxation LP: simplex iteration limit");
      compute_prices(price);

      std::optional<int> chosen;
      for (std::size_t j = 0; j < columns_.size() && !chosen; ++j) {
        if (column_basic_[j]) continue;
        double reduced = 1.0;
        for (const auto& [r, a] : columns_[j]) reduced -= price[r] * a;
        if (reduced > kEps) chosen = static_cast<int>(j);
      }
      for (int r = 0; r < rows_ && !chosen; ++r) {
        if (!slack_basic(r) && price[r] < -kEps) chosen = slack(r);
      }
      if (!chosen) return;
      const int entering = *chosen;

      std::fill(direction.begin(), direction.end(), 0.0);
      if (entering >= 0) {
        for (const auto& [r, a] : columns_[entering]) {
          for (int i = 0; i < rows_; ++i) direction[i] += basis_inverse_[index(i, r)] * a;
        }
      } else {
        const int r = slack_row(entering);
        for (int i = 0; i < rows_; ++i) direction[i] = basis_inverse_[index(i, r)];
      }

      int leave = -1;
      double best_ratio = kInfinity;
      for (int i = 0; i < rows_; ++i) {
        if (direction[i] <= kEps) continue;
        const double ratio = std::max(0.0, basic_value_[i]) / direction[i];
        if (ratio < best_ratio - 1e-12 ||
            (ratio <= best_ratio + 1e-12 && leave >= 0 && order(basis_[i]) < order(basis_[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave < 0) throw std::runtime_error("relaxation LP: unbounded packing program");
      pivot(entering, leave, direction);
      if (++pivots_since_refactor_ >= 64) refactor();
    }
  }

  [[nodiscard]] double objective() const {
    double total = 0.0;
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] >= 0) total += basic_value_[i];
    }
    return total;
  }

  void compute_prices(std::vector<double>& price) const {
    std::fill(price.begin(), price.end(), 0.0);
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] < 0) continue;
      for (int r = 0; r < rows_; ++r) price[r] += basis_inverse_[index(i, r)];
    }
  }

 private:
  [[nodiscard]] std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(rows_) + static_cast<std::size_t>(j);
  }
  static int slack(int r) { return -1 - r; }
  static int slack_row(int var) { return -1 - var; }
  [[nodiscard]] bool slack_basic(int r) const {
    return std::find(basis_.begin(), basis_.end(), slack(r)) != basis_.end();
  }
  // Bland order: structural columns first, then slacks.
  [[nodiscard]] long long order(int var) const {
    return var >= 0 ? var : static_cast<long long>(columns_.size()) + slack_row(var);
  }

  void pivot(int entering, int leave, const std::vector<double>& direction) {
    const double pivot_value = direction[leave];
    for (int c = 0; c < rows_; ++c) basis_inverse_[index(leave, c)] /= pivot_value;
    basic_value_[leave] /= pivot_value;
    for (int i = 0; i < rows_; ++i) {
      if (i == leave || std::abs(direction[i]) < 1e-15) continue;
      const double f = direction[i];
      for (int c = 0; c < rows_; ++c) basis_inverse_[index(i, c)] -= f * basis_inverse_[index(leave, c)];
      basic_value_[i] -= f * basic_value_[leave];
    }
    if (basis_[leave] >= 0) column_basic_[basis_[leave]] = 0;
    basis_[leave] = entering;
    if (entering >= 0) column_basic_[entering] = 1;
  }

  // Rebuilds the basis inverse by Gauss-Jordan elimination.
  void refactor() {
    pivots_since_refactor_ = 0;
    const auto n = static_cast<std::size_t>(rows_);
    std::vector<double> b(n * n, 0.0);
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] >= 0) {
        for (const auto& [r, a] : columns_[basis_[i]]) b[index(r, i)] = a;
      } else {
        b[index(slack_row(basis_[i]), i)] = 1.0;
      }
    }
    std::vector<double> inv(n * n, 0.0);
    for (int i = 0; i < rows_; ++i) inv[index(i, i)] = 1.0;
    for (int col = 0; col < rows_; ++col) {
      int best = col;
      for (int r = col + 1; r < rows_; ++r) {
        if (std::abs(b[index(r, col)]) > std::abs(b[index(best, col)])) best = r;
      }
      if (std::abs(b[index(best, col)]) < 1e-12) return;  // keep the updated inverse
      if (best != col) {
        for (int c = 0; c < rows_; ++c) {
          std::swap(b[index(best, c)], b[index(col, c)]);
          std::swap(inv[index(best, c)], inv[index(col, c)]);
        }
      }
      const double p = b[index(col, col)];
      for (int c = 0; c < rows_; ++c) {
        b[index(col, c)] /= p;
        inv[index(col, c)] /= p;
      }
      for (int r = 0; r < rows_; ++r) {
        if (r == col) continue;
        const double f = b[index(r, col)];
        if (f == 0.0) continue;
        for (int c = 0; c < rows_; ++c) {
          b[index(r, c)] -= f * b[index(col, c)];
          inv[index(r, c)] -= f * inv[index(col, c)];
        }
      }
    }
    basis_inverse_ = std::move(inv);
    for (int i = 0; i < rows_; ++i) {
      double v = 0.0;
      for (int c = 0; c < rows_; ++c) v += basis_inverse_[index(i, c)];
      basic_value_[i] = v;
    }
  }

  int rows_;
  std::vector<double> basis_inverse_;
  std::vector<double> basic_value_;
  std::vector<int> basis_;
  std::vector<std::vector<std::pair<int, double>>> columns_;
  std::vector<char> column_basic_;
  int pivots_since_refactor_ = 0;
};

struct PathTree {
  std::vector<double> dist;
  std::vector<VertexId> parent;
};

using HeapEntry = std::pair<double, VertexId>;
using MinHeap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>>;

// Vertex-weighted shortest paths from root; a path's length sums the
// weights of every vertex after the root.
PathTree stem_distances(const MultiGraph& g, VertexId root, const std::vector<double>& weight) {
  PathTree t{std::vector<double>(g.capacity(), kInfinity), std::vector<VertexId>(g.capacity(), -1)};
  MinHeap heap;
  t.dist[root] = 0.0;
  heap.emplace(0.0, root);
  while (!heap.empty()) {
    const auto [d, x] = heap.top();
    heap.pop();
    if (d > t.dist[x]) continue;
    for (const auto& nb : g.neighbors(x)) {
      const double nd = d + weight[nb.vertex];
      if (nd < t.dist[nb.vertex] - 1e-15) {
        t.dist[nb.vertex] = nd;
        t.parent[nb.vertex] = x;
        heap.emplace(nd, nb.vertex);
      }
    }
  }
  return t;
}

struct CycleAt {
  double weight = kInfinity;  // excludes the vertex itself
  std::vector<VertexId> others;
};

// Cheapest cycle through w, weighing every vertex but w.
CycleAt cheapest_cycle_at(const MultiGraph& g, VertexId w, const std::vector<double>& weight) {
  CycleAt best;
  if (g.has_loop(w)) {
    best.weight = 0.0;
    return best;
  }
  for (const auto& nb : g.neighbors(w)) {
    if (nb.multiplicity >= 2 && weight[nb.vertex] < best.weight) {
      best.weight = weight[nb.vertex];
      best.others = {nb.vertex};
    }
  }

  const std::size_t n = g.capacity();
  std::vector<double> dist(n, kInfinity);
  std::vector<VertexId> parent(n, -1);
  std::vector<VertexId> source(n, -1);
  MinHeap heap;
  for (const auto& nb : g.neighbors(w)) {
    dist[nb.vertex] = weight[nb.vertex];
    source[nb.vertex] = nb.vertex;
    heap.emplace(dist[nb.vertex], nb.vertex);
  }
  while (!heap.empty()) {
    const auto [d, x] = heap.top();
    heap.pop();
    if (d > dist[x]) continue;
    for (const auto& nb : g.neighbors(x)) {
      if (nb.vertex == w) continue;
      const double nd = d + weight[nb.vertex];
      if (nd < dist[nb.vertex] - 1e-15) {
        dist[nb.vertex] = nd;
        parent[nb.vertex] = x;
        source[nb.vertex] = source[x];
        heap.emplace(nd, nb.vertex);
      }
    }
  }

  VertexId bp = -1;
  VertexId bq = -1;
  for (VertexId p : g.vertices()) {
    if (p == w || source[p] < 0) continue;
    for (const auto& nb : g.neighbors(p)) {
      const VertexId q = nb.vertex;
      if (q == w || q < p || source[q] < 0 || source[q] == source[p]) continue;
      const double len = dist[p] + dist[q];
      if (len < best.weight - 1e-15) {
        best.weight = len;
        bp = p;
        bq = q;
      }
    }
  }
  if (bp >= 0) {
    best.others.clear();
    for (VertexId a = bp; a >= 0; a = parent[a]) best.others.push_back(a);
    for (VertexId b = bq; b >= 0; b = parent[b]) best.others.push_back(b);
  }
  return best;
}

// Closed walks from the root of weight below one: a cheapest stem to some w
// followed by a cheapest cycle at w and the stem back.
std::vector<Walk> violated_walks(const MultiGraph& g, VertexId root, const std::vector<double>& weight) {
  const PathTree stem = stem_distances(g, root, weight);
  std::vector<Walk> out;
  for (VertexId w : g.vertices()) {
    if (stem.dist[w] == kInfinity || 2.0 * stem.dist[w] >= 1.0 - 1e-7) continue;
    const CycleAt cycle = cheapest_cycle_at(g, w, weight);
    if (cycle.weight == kInfinity || 2.0 * stem.dist[w] + cycle.weight >= 1.0 - 1e-7) continue;
    std::map<VertexId, int> visits;
    for (VertexId a = w; a != root; a = stem.parent[a]) visits[a] += 2;
    for (VertexId c : cycle.others) visits[c] += 1;
    out.emplace_back(visits.begin(), visits.end());
  }
  return out;
}

struct WalkPool {
  std::vector<Walk> walks;
  std::set<Walk> seen;
  bool add(Walk w) {
    if (!seen.insert(w).second) return false;
    walks.push_back(std::move(w));
    return true;
  }
};

RelaxationLp lp_with_pool(const MultiGraph& g, VertexId root, std::span<const char> zero, WalkPool& pool) {
  std::vector<int> row_of(g.capacity(), -1);
  int rows = 0;
  for (VertexId v : g.vertices()) {
    if (v != root && !zero[v]) row_of[v] = rows++;
  }

  RelaxationLp out;
  out.x.assign(g.capacity(), 0.0);
  PackingSimplex lp(rows);
  auto project = [&](const Walk& walk) {
    std::vector<std::pair<int, double>> col;
    for (const auto& [v, count] : walk) {
      if (g.is_alive(v) && row_of[v] >= 0) col.emplace_back(row_of[v], static_cast<double>(count));
    }
    return col;
  };
  for (const auto& walk : pool.walks) {
    auto col = project(walk);
    if (col.empty()) {
      out.value = kInfinity;
      return out;
    }
    lp.add_column(std::move(col));
  }

  std::vector<double> price(static_cast<std::size_t>(rows));
  for (int round = 0;; ++round) {
    if (round > 10000) throw std::runtime_error("relaxation LP: column generation did not converge");
    lp.optimize();
    lp.compute_prices(price);
    std::fill(out.x.begin(), out.x.end(), 0.0);
    for (VertexId v : g.vertices()) {
      if (row_of[v] >= 0) out.x[v] = std::max(0.0, price[row_of[v]]);
    }
    bool added = false;
    for (auto& walk : violated_walks(g, root, out.x)) {
      auto col = project(walk);
      if (col.empty()) {
        out.value = kInfinity;
        return out;
      }
      if (pool.add(std::move(walk))) {
        lp.add_column(std::move(col));
        added = true;
      }
    }
    if (!added) break;
  }
  out.value = lp.objective();
  return out;
}

std::vector<VertexId> zero_component(const MultiGraph& g, VertexId root, std::span<const char> zero) {
  std::vector<char> seen(g.capacity(), 0);
  std::vector<VertexId> region{root};
  seen[root] = 1;
  for (std::size_t head = 0; head < region.size(); ++head) {
    for (const auto& nb : g.neighbors(region[head])) {
      if (zero[nb.vertex] && !seen[nb.vertex]) {
        seen[nb.vertex] = 1;
        region.push_back(nb.vertex);
      }
    }
  }
  std::sort(region.begin(), region.end());
  return region;
}

// Edge endpoints from v into the region (multiplicity counted).
std::vector<int> edges_into(const MultiGraph& g, std::span<const VertexId> region) {
  std::vector<int> count(g.capacity(), 0);
  for (VertexId r : region) {
    for (const auto& nb : g.neighbors(r)) count[nb.vertex] += nb.multiplicity;
  }
  return count;
}

}  // namespace

std::optional<Solution> rooted_integral_bruteforce(const RootedProblem& p) {
  const MultiGraph& g = p.graph;
  if (!g.is_alive(p.root)) throw ContractViolation("rooted_integral_bruteforce: root is not live");
  const auto live = g.vertices();
  if (live.size() > 20) throw ContractViolation("rooted_integral_bruteforce: more than 20 vertices");

  std::vector<VertexId> candidates;
  for (VertexId v : live) {
    const bool fixed = static_cast<std::size_t>(v) < p.undeletable.size() && p.undeletable[v];
    if (v != p.root && !fixed) candidates.push_back(v);
  }
  const std::size_t c = candidates.size();
  std::vector<char> removed(g.capacity(), 0);

  auto root_component_is_tree = [&]() {
    std::vector<char> seen(g.capacity(), 0);
    std::vector<VertexId> stack{p.root};
    seen[p.root] = 1;
    long long vertices = 0;
    long long endpoint_sum = 0;
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      ++vertices;
      if (g.has_loop(v)) endpoint_sum += 2;
      for (const auto& nb : g.neighbors(v)) {
        if (removed[nb.vertex]) continue;
        endpoint_sum += nb.multiplicity;
        if (!seen[nb.vertex]) {
          seen[nb.vertex] = 1;
          stack.push_back(nb.vertex);
        }
      }
    }
    return endpoint_sum / 2 == vertices - 1;
  };

  for (std::size_t size = 0; size <= c; ++size) {
    std::vector<std::size_t> pick(size);
    for (std::size_t i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      for (std::size_t i : pick) removed[candidates[i]] = 1;
      const bool ok = root_component_is_tree();
      for (std::size_t i : pick) removed[candidates[i]] = 0;
      if (ok) {
        Solution sol;
        for (std::size_t i : pick) sol.vertices.push_back(candidates[i]);
        return sol;
      }
      // next combination in lexicographic order
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == c - size + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return std::nullopt;
}

RelaxationLp solve_relaxation_lp(const MultiGraph& g, VertexId root, std::span<const char> zero) {
  WalkPool pool;
  std::vector<char> mask(g.capacity(), 0);
  for (std::size_t v = 0; v < zero.size() && v < mask.size(); ++v) mask[v] = zero[v];
  mask[root] = 1;
  return lp_with_pool(g, root, mask, pool);
}

HalfIntegralAssignment solve_relaxation(const RootedProblem& p) {
  const MultiGraph& g = p.graph;
  if (!g.is_alive(p.root)) throw ContractViolation("solve_relaxation: root is not live");

  std::vector<char> zero(g.capacity(), 0);
  for (std::size_t v = 0; v < p.undeletable.size() && v < zero.size(); ++v) zero[v] = p.undeletable[v];
  zero[p.root] = 1;
  {
    const auto region = zero_component(g, p.root, zero);
    if (!is_acyclic(g, std::span<const VertexId>(region))) {
      throw ContractViolation("solve_relaxation: undeletable vertices around the root contain a cycle");
    }
  }

  WalkPool pool;
  RelaxationLp lp = lp_with_pool(g, p.root, zero, pool);
  const double optimum = lp.value;
  if (optimum == kInfinity) throw ContractViolation("solve_relaxation: relaxation is infeasible");

  // Grow the zero region while the optimum stays put: first absorb every
  // vertex the current optimum already sets to zero, then try the single-edge
  // neighbours of the region one at a time.
  while (true) {
    for (VertexId v : g.vertices()) {
      if (!zero[v] && lp.x[v] <= kEps) zero[v] = 1;
    }
    const auto region = zero_component(g, p.root, zero);
    const auto into = edges_into(g, region);
    std::vector<char> in_region(g.capacity(), 0);
    for (VertexId r : region) in_region[r] = 1;

    bool grown = false;
    for (VertexId v : g.vertices()) {
      if (in_region[v] || zero[v] || into[v] != 1) continue;
      zero[v] = 1;
      RelaxationLp trial = lp_with_pool(g, p.root, zero, pool);
      if (trial.value <= optimum + 1e-7) {
        lp = std::move(trial);
        grown = true;
        break;
      }
      zero[v] = 0;
    }
    if (!grown) break;
  }

  HalfIntegralAssignment out;
  out.values.assign(g.capacity(), HalfValue::Zero);
  out.zero_region = zero_component(g, p.root, zero);
  out.lp_value = optimum;
  if (!is_acyclic(g, std::span<const VertexId>(out.zero_region))) {
    throw std::logic_error("solve_relaxation: zero region is not a tree");
  }
  const auto into = edges_into(g, out.zero_region);
  std::vector<char> in_region(g.capacity(), 0);
  for (VertexId r : out.zero_region) in_region[r] = 1;
  for (VertexId v : g.vertices()) {
    if (in_region[v] || into[v] == 0) continue;
    out.values[v] = into[v] == 1 ? HalfValue::Half : HalfValue::One;
    out.doubled_total += static_cast<int>(out.values[v]);
  }
  if (std::abs(out.total() - optimum) > 1e-6) {
    throw std::logic_error("solve_relaxation: no half-integral assignment attains the LP optimum " +
                           std::to_string(optimum));
  }
  return out;
}

VertexId choose_relaxation_root(Instance& inst) {
  std::map<VertexId, std::pair<int, VertexId>> classes;  // class -> (size, smallest member)
  for (VertexId v : inst.graph.vertices()) {
    if (!inst.is_undeletable(v)) continue;
    auto& entry = classes.try_emplace(inst.undeletable_components.find(v), 0, v).first->second;
    ++entry.first;
    entry.second = std::min(entry.second, v);
  }
  VertexId best = -1;
  int best_size = 0;
  for (const auto& [cls, entry] : classes) {
    if (entry.first > best_size || (entry.first == best_size && entry.second < best)) {
      best_size = entry.first;
      best = entry.second;
    }
  }
  return best;
}

PivotAction ii_step(Instance& inst) {
  const MultiGraph& g = inst.graph;
  auto highest_degree = [&](auto&& eligible) {
    VertexId best = -1;
    for (VertexId v : g.vertices()) {
      if (!eligible(v)) continue;
      if (best < 0 || g.degree(v) > g.degree(best)) best = v;
    }
    return best;
  };

  const VertexId root = choose_relaxation_root(inst);
  if (root < 0) return PivotAction::branch(highest_degree([&](VertexId v) { return !inst.is_undeletable(v); }));

  const auto relaxation = solve_relaxation({g, root, inst.undeletable});

  std::vector<VertexId> ones;
  for (VertexId v : g.vertices()) {
    if (relaxation.values[v] == HalfValue::One) ones.push_back(v);
  }
  std::vector<VertexId> grown;
  for (VertexId v : relaxation.zero_region) {
    if (!inst.is_undeletable(v)) grown.push_back(v);
  }
  if (!ones.empty() || !grown.empty()) {
    for (VertexId v : ones) inst.take_into_solution(v);
    for (VertexId v : grown) inst.make_undeletable(v);
    return PivotAction::rewritten();
  }

  // Every deletable neighbour of the root's U-component is valued 1/2.
  const VertexId root_class = inst.undeletable_components.find(root);
  std::vector<char> boundary(g.capacity(), 0);
  for (VertexId v : g.vertices()) {
    if (!inst.is_undeletable(v) || inst.undeletable_components.find(v) != root_class) continue;
    for (const auto& nb : g.neighbors(v)) {
      if (!inst.is_undeletable(nb.vertex)) boundary[nb.vertex] = 1;
    }
  }
  VertexId pivot = highest_degree([&](VertexId v) { return boundary[v] != 0; });
  if (pivot < 0) pivot = highest_degree([&](VertexId v) { return !inst.is_undeletable(v); });
  return PivotAction::branch(pivot);
}

}  // namespace fvs
