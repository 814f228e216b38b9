#include "fvs/instance.hpp"

#include <numeric>

namespace fvs {

UnionFind::UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

void UnionFind::grow(std::size_t n) {
  const std::size_t old = parent_.size();
  if (n <= old) return;
  parent_.resize(n);
  std::iota(parent_.begin() + static_cast<std::ptrdiff_t>(old), parent_.end(), static_cast<VertexId>(old));
}

VertexId UnionFind::find(VertexId x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(VertexId a, VertexId b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (b < a) std::swap(a, b);
  parent_[b] = a;
  return true;
}

void ReductionQueue::push(VertexId v) {
  if (static_cast<std::size_t>(v) >= queued_.size()) queued_.resize(static_cast<std::size_t>(v) + 1, 0);
  if (queued_[v]) return;
  queued_[v] = 1;
  pending_.push_back(v);
}

VertexId ReductionQueue::pop() {
  if (pending_.empty()) return -1;
  const VertexId v = pending_.front();
  pending_.pop_front();
  queued_[v] = 0;
  return v;
}

void ReductionQueue::clear() {
  pending_.clear();
  queued_.clear();
}

Instance::Instance(MultiGraph g, int budget_)
    : graph(std::move(g)),
      undeletable(graph.capacity(), 0),
      irreducible(graph.capacity(), 0),
      undeletable_components(graph.capacity()),
      budget(budget_) {
  enqueue_all();
}

bool Instance::has_undeletable() const {
  for (VertexId v = 0; v < static_cast<VertexId>(graph.capacity()); ++v) {
    if (undeletable[v] && graph.is_alive(v)) return true;
  }
  return false;
}

VertexId Instance::add_vertex(bool make_undeletable, bool make_irreducible) {
  const VertexId v = graph.add_vertex();
  undeletable.push_back(make_undeletable ? 1 : 0);
  irreducible.push_back(make_irreducible ? 1 : 0);
  undeletable_components.grow(graph.capacity());
  return v;
}

void Instance::enqueue_neighbors(VertexId v) {
  for (const auto& nb : graph.neighbors(v)) queue.push(nb.vertex);
}

void Instance::enqueue_all() {
  for (VertexId v : graph.vertices()) queue.push(v);
}

void Instance::take_into_solution(VertexId v) {
  if (undeletable[v]) throw ContractViolation("take_into_solution: vertex is undeletable");
  enqueue_neighbors(v);
  graph.delete_vertex(v);
  forced.push_back(v);
  --budget;
  if (budget < 0) infeasible = true;
}

void Instance::discard_vertex(VertexId v) {
  enqueue_neighbors(v);
  graph.delete_vertex(v);
}

void Instance::make_undeletable(VertexId v) {
  if (!graph.is_alive(v)) throw ContractViolation("make_undeletable: vertex is not live");
  if (undeletable[v]) return;
  undeletable[v] = 1;
  if (graph.has_loop(v)) infeasible = true;
  for (const auto& nb : graph.neighbors(v)) {
    if (!undeletable[nb.vertex]) continue;
    if (nb.multiplicity >= 2 || !undeletable_components.unite(v, nb.vertex)) infeasible = true;
  }
  queue.push(v);
  enqueue_neighbors(v);
}

void Instance::suppress(VertexId v) {
  const auto [u, w] = graph.suppress_vertex(v);
  queue.push(u);
  queue.push(w);
  if (u == w) {
    if (undeletable[u]) infeasible = true;
    return;
  }
  if (undeletable[u] && undeletable[w]) {
    // Path u-v-w inside U already joined them when v is undeletable.
    if (!undeletable[v] && !undeletable_components.unite(u, w)) infeasible = true;
    if (graph.multiplicity(u, w) >= 2) infeasible = true;
  }
}

VertexId Instance::subdivide_with_gadget(VertexId u, VertexId v) {
  if (graph.multiplicity(u, v) != 1) throw ContractViolation("subdivide_with_gadget: uv must be a single edge");
  graph.remove_edge(u, v);
  const VertexId w = add_vertex(true, true);
  graph.add_edge(u, w);
  graph.add_edge(w, v);
  queue.push(u);
  queue.push(v);
  return w;
}

Instance Instance::extract(std::span<const VertexId> keep) const {
  Instance sub;
  sub.graph = graph.induced_subgraph(keep);
  sub.undeletable.assign(keep.size(), 0);
  sub.irreducible.assign(keep.size(), 0);
  sub.undeletable_components = UnionFind(keep.size());
  sub.budget = budget;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    sub.undeletable[i] = undeletable[keep[i]];
    sub.irreducible[i] = irreducible[keep[i]];
  }
  for (VertexId v = 0; v < static_cast<VertexId>(keep.size()); ++v) {
    if (!sub.undeletable[v]) continue;
    for (const auto& nb : sub.graph.neighbors(v)) {
      if (sub.undeletable[nb.vertex] && !sub.undeletable_components.unite(v, nb.vertex) && v < nb.vertex) {
        sub.infeasible = true;
      }
      if (sub.undeletable[nb.vertex] && nb.multiplicity >= 2) sub.infeasible = true;
    }
    if (sub.graph.has_loop(v)) sub.infeasible = true;
  }
  return sub;
}

}  // namespace fvs
