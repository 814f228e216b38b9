#include <doctest.h>

#include "fvs/instance.hpp"
#include "graphs.hpp"

using namespace fvs;
using fvs::testing::from_edges;

TEST_CASE("queue deduplicates and skips nothing live") {
  ReductionQueue q;
  q.push(3);
  q.push(1);
  q.push(3);
  CHECK(q.size() == 2);
  CHECK(q.pop() == 3);
  CHECK(q.pop() == 1);
  CHECK(q.pop() == -1);
  q.push(3);
  CHECK(q.pop() == 3);
}

TEST_CASE("union-find") {
  UnionFind uf(4);
  CHECK(uf.unite(0, 1));
  CHECK(uf.unite(2, 1));
  CHECK_FALSE(uf.unite(0, 2));
  CHECK(uf.find(2) == uf.find(0));
  uf.grow(6);
  CHECK(uf.find(5) == 5);
}

TEST_CASE("take_into_solution spends budget") {
  Instance inst(fvs::testing::cycle(4), 1);
  inst.take_into_solution(0);
  CHECK(inst.budget == 0);
  CHECK(inst.forced == std::vector<VertexId>{0});
  CHECK_FALSE(inst.graph.is_alive(0));
  inst.take_into_solution(2);
  CHECK(inst.infeasible);

  Instance u(fvs::testing::cycle(4), 3);
  u.make_undeletable(1);
  CHECK_THROWS_AS(u.take_into_solution(1), ContractViolation);
}

TEST_CASE("make_undeletable detects cycles inside U") {
  Instance inst(fvs::testing::cycle(3), 3);
  inst.make_undeletable(0);
  inst.make_undeletable(1);
  CHECK_FALSE(inst.infeasible);
  inst.make_undeletable(2);
  CHECK(inst.infeasible);

  MultiGraph dbl = from_edges(3, {{0, 1}, {0, 1}, {1, 2}});
  Instance d(dbl, 3);
  d.make_undeletable(0);
  d.make_undeletable(1);
  CHECK(d.infeasible);
}

TEST_CASE("suppressing a U vertex keeps the classes in sync") {
  // path 0-1-2 with 1 in U, plus 0-3-2
  Instance inst(from_edges(4, {{0, 1}, {1, 2}, {0, 3}, {3, 2}}), 3);
  inst.make_undeletable(0);
  inst.make_undeletable(1);
  inst.make_undeletable(2);
  inst.suppress(1);
  CHECK(inst.graph.multiplicity(0, 2) == 1);
  CHECK(inst.undeletable_components.find(0) == inst.undeletable_components.find(2));
  CHECK_FALSE(inst.infeasible);
}

TEST_CASE("subdivide_with_gadget") {
  Instance inst(from_edges(2, {{0, 1}}), 3);
  const VertexId w = inst.subdivide_with_gadget(0, 1);
  CHECK(inst.is_undeletable(w));
  CHECK(inst.is_irreducible(w));
  CHECK(inst.graph.multiplicity(0, 1) == 0);
  CHECK(inst.graph.degree(w) == 2);
  CHECK(inst.graph.num_edges() == 2);
}

TEST_CASE("extract carries flags") {
  Instance inst(fvs::testing::disjoint_triangles(2), 4);
  inst.make_undeletable(4);
  const std::vector<VertexId> keep{3, 4, 5};
  const Instance sub = inst.extract(keep);
  CHECK(sub.graph.num_vertices() == 3);
  CHECK(sub.is_undeletable(1));
  CHECK_FALSE(sub.is_undeletable(0));
  CHECK(sub.budget == 4);
  CHECK(sub.queue.empty());
}
