#include "fvs/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace fvs {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

MultiGraph::MultiGraph(std::size_t n)
    : adj_(n), degree_(n, 0), loop_(n, 0), alive_(n, 1), n_live_(n) {}

VertexId MultiGraph::add_vertex() {
  const auto id = static_cast<VertexId>(alive_.size());
  adj_.emplace_back();
  degree_.push_back(0);
  loop_.push_back(0);
  alive_.push_back(1);
  ++n_live_;
  return id;
}

VertexId MultiGraph::add_vertex(std::string label) {
  const VertexId id = add_vertex();
  if (!labels_) {
    labels_ = std::make_shared<std::vector<std::string>>();
  } else if (labels_.use_count() > 1) {
    labels_ = std::make_shared<std::vector<std::string>>(*labels_);
  }
  labels_->resize(static_cast<std::size_t>(id) + 1);
  (*labels_)[id] = std::move(label);
  return id;
}

void MultiGraph::check_alive(VertexId v, const char* what) const {
  if (!is_alive(v)) {
    throw ContractViolation(std::string(what) + ": vertex " + std::to_string(v) + " is not live");
  }
}

void MultiGraph::add_half_edge(VertexId u, VertexId v, int multiplicity) {
  for (auto& nb : adj_[u]) {
    if (nb.vertex == v) {
      nb.multiplicity += multiplicity;
      degree_[u] += multiplicity;
      return;
    }
  }
  adj_[u].push_back({v, multiplicity});
  degree_[u] += multiplicity;
}

int MultiGraph::remove_half_edge(VertexId u, VertexId v) {
  auto& list = adj_[u];
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (list[i].vertex == v) {
      const int mult = list[i].multiplicity;
      list[i] = list.back();
      list.pop_back();
      degree_[u] -= mult;
      return mult;
    }
  }
  return 0;
}

void MultiGraph::add_edge(VertexId u, VertexId v, int multiplicity) {
  check_alive(u, "add_edge");
  check_alive(v, "add_edge");
  if (multiplicity <= 0) return;
  if (u == v) {
    set_loop(u, true);
    return;
  }
  add_half_edge(u, v, multiplicity);
  add_half_edge(v, u, multiplicity);
  m_live_ += static_cast<std::size_t>(multiplicity);
}

int MultiGraph::remove_edge(VertexId u, VertexId v) {
  check_alive(u, "remove_edge");
  check_alive(v, "remove_edge");
  if (u == v) {
    const bool had = loop_[u];
    set_loop(u, false);
    return had ? 1 : 0;
  }
  const int mult = remove_half_edge(u, v);
  remove_half_edge(v, u);
  m_live_ -= static_cast<std::size_t>(mult);
  return mult;
}

void MultiGraph::remove_edge_copy(VertexId u, VertexId v) {
  const int mult = multiplicity(u, v);
  if (mult == 0) throw ContractViolation("remove_edge_copy: no such edge");
  remove_edge(u, v);
  if (mult > 1) add_edge(u, v, mult - 1);
}

void MultiGraph::set_loop(VertexId v, bool loop) {
  check_alive(v, "set_loop");
  if (static_cast<bool>(loop_[v]) == loop) return;
  loop_[v] = loop ? 1 : 0;
  if (loop) {
    degree_[v] += 2;
    ++m_live_;
  } else {
    degree_[v] -= 2;
    --m_live_;
  }
}

void MultiGraph::delete_vertex(VertexId v) {
  check_alive(v, "delete_vertex");
  for (const auto& nb : adj_[v]) {
    remove_half_edge(nb.vertex, v);
    m_live_ -= static_cast<std::size_t>(nb.multiplicity);
  }
  if (loop_[v]) --m_live_;
  adj_[v].clear();
  adj_[v].shrink_to_fit();
  degree_[v] = 0;
  loop_[v] = 0;
  alive_[v] = 0;
  --n_live_;
}

std::pair<VertexId, VertexId> MultiGraph::suppress_vertex(VertexId v, int multiplicity_cap) {
  check_alive(v, "suppress_vertex");
  if (degree_[v] != 2 || loop_[v]) {
    throw ContractViolation("suppress_vertex: vertex " + std::to_string(v) + " does not have degree 2");
  }
  const VertexId u = adj_[v][0].vertex;
  const VertexId w = adj_[v].size() == 2 ? adj_[v][1].vertex : u;
  delete_vertex(v);
  if (u == w) {
    set_loop(u, true);
  } else {
    const int existing = multiplicity(u, w);
    if (existing < multiplicity_cap) add_edge(u, w, 1);
  }
  return {u, w};
}

int MultiGraph::cap_multiplicities(VertexId v, int cap) {
  int removed = 0;
  for (auto& nb : adj_[v]) {
    if (nb.multiplicity > cap) {
      const int excess = nb.multiplicity - cap;
      nb.multiplicity = cap;
      degree_[v] -= excess;
      for (auto& back : adj_[nb.vertex]) {
        if (back.vertex == v) {
          back.multiplicity = cap;
          break;
        }
      }
      degree_[nb.vertex] -= excess;
      m_live_ -= static_cast<std::size_t>(excess);
      removed += excess;
    }
  }
  return removed;
}

int MultiGraph::multiplicity(VertexId u, VertexId v) const {
  if (u == v) return loop_[u] ? 1 : 0;
  const auto& list = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
  const VertexId other = adj_[u].size() <= adj_[v].size() ? v : u;
  for (const auto& nb : list) {
    if (nb.vertex == other) return nb.multiplicity;
  }
  return 0;
}

std::vector<VertexId> MultiGraph::vertices() const {
  std::vector<VertexId> out;
  out.reserve(n_live_);
  for (std::size_t v = 0; v < alive_.size(); ++v) {
    if (alive_[v]) out.push_back(static_cast<VertexId>(v));
  }
  return out;
}

std::string MultiGraph::label(VertexId v) const {
  if (labels_ && static_cast<std::size_t>(v) < labels_->size() && !(*labels_)[v].empty()) {
    return (*labels_)[v];
  }
  return "_" + std::to_string(v);
}

MultiGraph MultiGraph::induced_subgraph(std::span<const VertexId> keep) const {
  MultiGraph sub;
  std::vector<VertexId> map(capacity(), -1);
  for (VertexId v : keep) {
    check_alive(v, "induced_subgraph");
    map[v] = labels_ ? sub.add_vertex(label(v)) : sub.add_vertex();
  }
  for (VertexId v : keep) {
    if (loop_[v]) sub.set_loop(map[v], true);
    for (const auto& nb : adj_[v]) {
      if (map[nb.vertex] >= 0 && v < nb.vertex) sub.add_edge(map[v], map[nb.vertex], nb.multiplicity);
    }
  }
  return sub;
}

bool MultiGraph::audit() const {
  std::size_t n = 0;
  std::size_t twice_m = 0;
  std::size_t loops = 0;
  for (std::size_t v = 0; v < alive_.size(); ++v) {
    if (!alive_[v]) {
      if (!adj_[v].empty() || loop_[v] || degree_[v] != 0) return false;
      continue;
    }
    ++n;
    int deg = loop_[v] ? 2 : 0;
    loops += loop_[v] ? 1 : 0;
    for (const auto& nb : adj_[v]) {
      if (nb.multiplicity <= 0 || nb.vertex == static_cast<VertexId>(v) || !is_alive(nb.vertex)) return false;
      int back = 0;
      int seen = 0;
      for (const auto& other : adj_[nb.vertex]) {
        if (other.vertex == static_cast<VertexId>(v)) {
          back = other.multiplicity;
          ++seen;
        }
      }
      if (seen != 1 || back != nb.multiplicity) return false;
      deg += nb.multiplicity;
      twice_m += static_cast<std::size_t>(nb.multiplicity);
    }
    if (deg != degree_[v]) return false;
  }
  return n == n_live_ && twice_m % 2 == 0 && twice_m / 2 + loops == m_live_;
}

bool is_acyclic(const MultiGraph& g, std::optional<std::span<const VertexId>> restrict_to) {
  std::vector<char> inside(g.capacity(), 0);
  std::vector<VertexId> members;
  if (restrict_to) {
    for (VertexId v : *restrict_to) {
      if (!g.is_alive(v)) throw ContractViolation("is_acyclic: restriction contains a dead vertex");
      inside[v] = 1;
    }
    members.assign(restrict_to->begin(), restrict_to->end());
  } else {
    members = g.vertices();
    for (VertexId v : members) inside[v] = 1;
  }
  DisjointSets sets(g.capacity());
  for (VertexId v : members) {
    if (g.has_loop(v)) return false;
    for (const auto& nb : g.neighbors(v)) {
      if (!inside[nb.vertex] || nb.vertex < v) continue;
      if (nb.multiplicity >= 2) return false;
      if (!sets.unite(static_cast<std::size_t>(v), static_cast<std::size_t>(nb.vertex))) return false;
    }
  }
  return true;
}

bool verify_solution(const MultiGraph& g, std::span<const VertexId> x) {
  std::vector<char> removed(g.capacity(), 0);
  for (VertexId v : x) {
    if (!g.is_alive(v)) throw ContractViolation("verify_solution: solution contains a vertex not in the graph");
    removed[v] = 1;
  }
  std::vector<VertexId> rest;
  for (VertexId v : g.vertices()) {
    if (!removed[v]) rest.push_back(v);
  }
  return is_acyclic(g, std::span<const VertexId>(rest));
}

std::vector<std::vector<VertexId>> components(const MultiGraph& g) {
  std::vector<std::vector<VertexId>> out;
  std::vector<char> seen(g.capacity(), 0);
  std::vector<VertexId> stack;
  for (VertexId start : g.vertices()) {
    if (seen[start]) continue;
    std::vector<VertexId> comp;
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (const auto& nb : g.neighbors(v)) {
        if (!seen[nb.vertex]) {
          seen[nb.vertex] = 1;
          stack.push_back(nb.vertex);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

std::size_t largest_component(const std::vector<std::vector<VertexId>>& comps) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < comps.size(); ++i) {
    if (comps[i].size() > comps[best].size()) best = i;
  }
  return best;
}

}  // namespace fvs
