#include <doctest.h>

#include <algorithm>
#include <random>

#include "fvs/approx.hpp"
#include "fvs/branch.hpp"
#include "fvs/oracle.hpp"
#include "graphs.hpp"

using namespace fvs;
using fvs::testing::from_edges;

namespace {

std::vector<BranchConfig> every_row() {
  std::vector<BranchConfig> out;
  for (const auto& name : comparison_algorithms()) {
    if (name == "ilp") continue;
    out.push_back(parse_algorithm(name).branch);
  }
  for (const char* extra : {"cao", "cao-double", "cao-undel", "cfllv", "ii", "kp+deg3", "ii+lb+ic", "cao-double+lb"}) {
    out.push_back(parse_algorithm(extra).branch);
  }
  return out;
}

std::optional<std::vector<VertexId>> run_decide(const MultiGraph& g, int k, const BranchConfig& cfg,
                                                SearchStats* stats = nullptr) {
  SearchContext ctx(cfg);
  Instance inst(g, k);
  auto out = decide(std::move(inst), init_hints(g, cfg), ctx);
  if (stats != nullptr) *stats = ctx.stats;
  return out;
}

}  // namespace

TEST_CASE("algorithm names round-trip") {
  for (const auto& name : comparison_algorithms()) {
    CAPTURE(name);
    CHECK(format_algorithm(parse_algorithm(name)) == name);
  }
  CHECK(format_algorithm(parse_algorithm("cao+lb+cc+deg3")) == "cao+cc+deg3+lb");
  CHECK_THROWS_AS((void)parse_algorithm("cfllv+deg3"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_algorithm("kp+cc"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_algorithm("cao+cc+cc"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_algorithm("cao+fast"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_algorithm("ilp+cc"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_algorithm(""), std::invalid_argument);
  try {
    (void)parse_algorithm("bogus");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("kp+cc+deg3+lb+ic") != std::string::npos);
  }
}

TEST_CASE("decide on small shapes") {
  const BranchConfig cfg;
  const auto c5 = fvs::testing::cycle(5);
  CHECK_FALSE(run_decide(c5, 0, cfg).has_value());
  const auto one = run_decide(c5, 1, cfg);
  REQUIRE(one.has_value());
  CHECK(one->size() == 1);
  CHECK(verify_solution(c5, *one));

  const auto k4 = fvs::testing::complete(4);
  CHECK_FALSE(run_decide(k4, 1, cfg).has_value());
  const auto two = run_decide(k4, 2, cfg);
  REQUIRE(two.has_value());
  CHECK(two->size() == 2);
  CHECK(verify_solution(k4, *two));
}

TEST_CASE("solve_min on named graphs") {
  const std::vector<std::pair<MultiGraph, std::size_t>> cases = {
      {fvs::testing::random_tree(3, 15), 0},   {fvs::testing::cycle(5), 1},
      {fvs::testing::petersen(), 3},           {fvs::testing::complete(5), 3},
      {fvs::testing::cube(), 3},               {fvs::testing::disjoint_triangles(3), 3},
      {fvs::testing::theta(4, 3), 1},
  };
  for (const auto& cfg : every_row()) {
    CAPTURE(format_algorithm({false, cfg}));
    for (const auto& [g, expected] : cases) {
      const auto r = solve_min(g, cfg);
      CHECK(r.status == SolveStatus::Optimal);
      CHECK(r.solution.size() == expected);
      CHECK(verify_solution(g, r.solution.vertices));
    }
  }
}

TEST_CASE("named optima agree with brute force") {
  CHECK(min_fvs_bruteforce(fvs::testing::petersen())->size() == 3);
  CHECK(min_fvs_bruteforce(fvs::testing::complete(5))->size() == 3);
  CHECK(min_fvs_bruteforce(fvs::testing::cube())->size() == 3);
  CHECK(min_fvs_bruteforce(fvs::testing::theta(4, 3))->size() == 1);
}

TEST_CASE("decide matches brute force for every strategy and toggle") {
  const auto configs = every_row();
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    CAPTURE(seed);
    const auto g = fvs::testing::random_multigraph(seed);
    const auto opt = min_fvs_bruteforce(g);
    REQUIRE(opt.has_value());
    const int k = static_cast<int>(opt->size());
    for (const auto& cfg : configs) {
      CAPTURE(format_algorithm({false, cfg}));
      const auto found = run_decide(g, k, cfg);
      REQUIRE(found.has_value());
      CHECK(static_cast<int>(found->size()) <= k);
      CHECK(verify_solution(g, *found));
      if (k > 0) CHECK_FALSE(run_decide(g, k - 1, cfg).has_value());
    }
  }
}

TEST_CASE("solve_min is toggle neutral on random graphs") {
  const auto configs = every_row();
  for (std::uint64_t seed = 1000; seed < 1060; ++seed) {
    CAPTURE(seed);
    const auto g = fvs::testing::random_simple_graph(seed, 16, 30);
    const auto expected = solve_min(g, configs.front()).solution.size();
    for (const auto& cfg : configs) {
      CAPTURE(format_algorithm({false, cfg}));
      const auto r = solve_min(g, cfg);
      CHECK(r.solution.size() == expected);
      CHECK(verify_solution(g, r.solution.vertices));
    }
  }
}

TEST_CASE("lower bound never adds nodes") {
  for (const char* base : {"cao", "cao+cc+deg3", "cfllv+cc+ic", "kp+cc+deg3+ic", "ii+cc", "cao-double+cc+deg3+ic"}) {
    CAPTURE(base);
    BranchConfig plain = parse_algorithm(base).branch;
    BranchConfig pruned = plain;
    pruned.lower_bound = true;
    for (std::uint64_t seed = 2000; seed < 2080; ++seed) {
      CAPTURE(seed);
      const auto g = fvs::testing::random_simple_graph(seed, 14, 26);
      const auto a = solve_min(g, plain);
      const auto b = solve_min(g, pruned);
      CHECK(b.solution.size() == a.solution.size());
      CHECK(b.stats.nodes_visited <= a.stats.nodes_visited);
    }
  }
}

TEST_CASE("stale and adversarial hints keep results optimal") {
  std::mt19937_64 rng(99);
  for (std::uint64_t seed = 3000; seed < 3200; ++seed) {
    CAPTURE(seed);
    const auto g = fvs::testing::random_multigraph(seed);
    const auto opt = min_fvs_bruteforce(g);
    std::vector<VertexId> junk;
    for (int i = 0; i < 12; ++i) junk.push_back(static_cast<VertexId>(rng() % (g.capacity() + 4)) - 2);
    for (const char* name : {"cao+ic", "cfllv+ic", "kp+deg3+ic", "ii+ic"}) {
      CAPTURE(name);
      const BranchConfig cfg = parse_algorithm(name).branch;
      SearchContext ctx(cfg);
      const auto found = decide(Instance(g, static_cast<int>(opt->size())), BranchHints(junk), ctx);
      REQUIRE(found.has_value());
      CHECK(found->size() == opt->size());
      CHECK(verify_solution(g, *found));
    }
  }
}

TEST_CASE("hints follow the heuristic deletion order") {
  BranchConfig cfg;
  cfg.iterative_compression = true;
  CHECK(init_hints(fvs::testing::random_tree(1, 10), cfg).empty());
  CHECK(init_hints(fvs::testing::cycle(5), cfg).queue->size() == 1);
  const auto tri = fvs::testing::disjoint_triangles(3);
  const auto hints = init_hints(tri, cfg);
  CHECK(*hints.queue == approximate(tri).vertices);
  CHECK(hints.queue->size() == 3);
  CHECK(min_fvs_bruteforce(tri)->size() == 3);
}

TEST_CASE("pivot rules") {
  SUBCASE("max degree picks the star centre") {
    const auto g = from_edges(8, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {1, 2}, {6, 7}});
    Instance inst(g, 5);
    CHECK(pick_pivot(inst, BranchConfig{}).vertex == 0);
  }
  SUBCASE("edges into U decide for cfllv") {
    const auto g = from_edges(8, {{0, 1}, {0, 2}, {0, 3}, {4, 1}, {4, 5}, {4, 6}, {4, 7}});
    Instance inst(g, 5);
    for (VertexId u : {1, 2, 3}) inst.make_undeletable(u);
    BranchConfig cfg;
    cfg.strategy = Strategy::CFLLV;
    CHECK(pick_pivot(inst, cfg).vertex == 0);
    cfg.strategy = Strategy::Cao;
    CHECK(pick_pivot(inst, cfg).vertex == 4);
  }
  SUBCASE("cfllv without U falls back to max degree") {
    const auto g = from_edges(5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}});
    Instance inst(g, 5);
    BranchConfig cfg;
    cfg.strategy = Strategy::CFLLV;
    CHECK(pick_pivot(inst, cfg).vertex == 1);
  }
  SUBCASE("double edges first") {
    MultiGraph g = from_edges(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {4, 5}, {5, 3}});
    g.add_edge(4, 5);
    Instance inst(g, 5);
    BranchConfig cfg;
    cfg.strategy = Strategy::CaoDouble;
    CHECK(pick_pivot(inst, cfg).vertex == 4);
  }
  SUBCASE("subcubic dispatch under deg3") {
    Instance inst(fvs::testing::petersen(), 5);
    BranchConfig cfg;
    cfg.subcubic = true;
    CHECK(pick_pivot(inst, cfg).kind == PivotAction::Kind::Subcubic);
    cfg.subcubic = false;
    CHECK(pick_pivot(inst, cfg).kind == PivotAction::Kind::Branch);
  }
}

TEST_CASE("kp step") {
  SUBCASE("one deletable neighbour gets a gadget") {
    // v=0 with u=1 deletable and a=2, b=3 undeletable
    const auto g = from_edges(6, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {1, 5}, {4, 5}});
    Instance inst(g, 5);
    inst.make_undeletable(2);
    inst.make_undeletable(3);
    CHECK(kp_step(inst).kind == PivotAction::Kind::Rewritten);
    CHECK(inst.graph.multiplicity(0, 1) == 0);
    const VertexId w = static_cast<VertexId>(inst.graph.capacity()) - 1;
    CHECK(inst.is_undeletable(w));
    CHECK(inst.is_irreducible(w));
    CHECK(inst.graph.multiplicity(0, w) == 1);
    CHECK(inst.graph.multiplicity(1, w) == 1);
  }
  SUBCASE("all tents dispatch") {
    const auto g = from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {4, 1}, {4, 2}, {4, 3}});
    Instance inst(g, 5);
    for (VertexId u : {1, 2, 3}) inst.make_undeletable(u);
    CHECK(kp_step(inst).kind == PivotAction::Kind::Subcubic);
  }
  SUBCASE("non-tent with four edges into U") {
    const auto g = from_edges(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {5, 1}, {5, 2}, {5, 3}});
    Instance inst(g, 5);
    for (VertexId u : {1, 2, 3, 4}) inst.make_undeletable(u);
    const auto action = kp_step(inst);
    CHECK(action.kind == PivotAction::Kind::Branch);
    CHECK(action.vertex == 0);
  }
}

TEST_CASE("timeout returns the heuristic bound") {
  BranchConfig cfg;
  cfg.time_limit = std::chrono::milliseconds(1);
  const auto g = fvs::testing::random_simple_graph(5, 90, 400);
  const auto r = solve_min(g, cfg);
  CHECK(r.status == SolveStatus::Timeout);
  CHECK(r.solution.size() == approximate(g).size());
  CHECK(verify_solution(g, r.solution.vertices));
}

TEST_CASE("kernel hook cadence") {
  int calls = 0;
  BranchConfig cfg = parse_algorithm("ii+cc+kernel").branch;
  cfg.kernel_hook = [&](Instance&) { ++calls; };
  const auto g = fvs::testing::random_simple_graph(11, 14, 28);
  const auto r = solve_min(g, cfg);
  CHECK(static_cast<std::uint64_t>(calls) == r.stats.kernel_calls);
  CHECK(r.stats.kernel_calls > 0);
  cfg.kernel_cadence = KernelCadence::EveryStep;
  const auto every = solve_min(g, cfg);
  CHECK(every.stats.kernel_calls >= r.stats.kernel_calls);
  CHECK(every.solution.size() == r.solution.size());
}

TEST_CASE("statistics") {
  const auto g = fvs::testing::random_simple_graph(21, 30, 60);
  const auto r = solve_min(g, parse_algorithm("cao+cc+deg3+lb").branch);
  CHECK(r.stats.nodes_visited > 0);
  CHECK(r.stats.reductions.calls == r.stats.nodes_visited);
  CHECK(r.stats.reductions.initial_dn_pct >= 0.0);
  CHECK(r.stats.reductions.initial_dn_pct <= 100.0);
  const auto kp = solve_min(g, parse_algorithm("kp+cc+deg3+ic").branch);
  CHECK(kp.solution.size() == r.solution.size());
}
