#include <doctest.h>

#include <random>
#include <sstream>

#include "fvs/ilp.hpp"
#include "fvs/oracle.hpp"
#include "graphs.hpp"

using namespace fvs;
using fvs::testing::from_edges;

namespace {

// Smallest weight of a 0/1 vector hitting every row, by enumeration.
int brute_force_cover(const IlpModel& m) {
  int best = m.num_variables;
  for (std::uint32_t mask = 0; mask < (1u << m.num_variables); ++mask) {
    bool ok = true;
    for (const auto& row : m.rows) {
      bool hit = false;
      for (int i : row) hit = hit || ((mask >> i) & 1u);
      ok = ok && hit;
    }
    if (ok) best = std::min(best, __builtin_popcount(mask));
  }
  return best;
}

int weight(const std::vector<char>& x) {
  int w = 0;
  for (char c : x) w += c;
  return w;
}

}  // namespace

TEST_CASE("shortest cycles") {
  CHECK(shortest_cycles(fvs::testing::random_tree(4, 12)).empty());
  const auto c5 = shortest_cycles(fvs::testing::cycle(5));
  REQUIRE(c5.size() == 1);
  CHECK(c5[0].vertices.size() == 5);

  // Paths of lengths 2, 2 and 3 between vertices 0 and 1.
  const auto g = from_edges(6, {{0, 2}, {2, 1}, {0, 3}, {3, 1}, {0, 4}, {4, 5}, {5, 1}});
  const auto cycles = shortest_cycles(g);
  std::size_t shortest = 100;
  for (const auto& c : cycles) shortest = std::min(shortest, c.vertices.size());
  CHECK(shortest == 4);
  CHECK(cycles.front().vertices == std::vector<VertexId>{0, 1, 2, 3});
}

TEST_CASE("builtin backend") {
  CHECK(builtin_solve(IlpModel{3, {}, {}}) == std::vector<char>{0, 0, 0});
  const auto one = builtin_solve(IlpModel{3, {{0, 1, 2}}, {}});
  CHECK(weight(one) == 1);

  IlpModel k4{4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}, {}};
  CHECK(brute_force_cover(k4) == 2);
  CHECK(weight(builtin_solve(k4)) == 2);

  CHECK_THROWS_AS((void)builtin_solve(IlpModel{70, {{0}}, {}}), std::length_error);
  CHECK_THROWS_AS((void)builtin_solve(IlpModel{10, {{0}}, {}}, 8), std::length_error);
}

TEST_CASE("builtin backend matches enumeration on random covers") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 300; ++round) {
    IlpModel m;
    m.num_variables = 1 + static_cast<int>(rng() % 14);
    const int rows = static_cast<int>(rng() % 12);
    for (int r = 0; r < rows; ++r) {
      std::vector<int> row;
      for (int i = 0; i < m.num_variables; ++i) {
        if (rng() % 3 == 0) row.push_back(i);
      }
      if (row.empty()) row.push_back(static_cast<int>(rng() % m.num_variables));
      m.rows.push_back(row);
    }
    if (round % 2 == 0) m.warm_start.assign(m.num_variables, 1);
    const auto x = builtin_solve(m);
    CHECK(weight(x) == brute_force_cover(m));
  }
}

TEST_CASE("LP text round trip") {
  IlpModel m{5, {{0, 3}, {1, 2, 4}}, {1, 0, 0, 1, 0}};
  std::stringstream text;
  write_lp_model(text, m);
  CHECK(text.str().find("Subject To") != std::string::npos);
  CHECK(text.str().find(" c1: x1 + x2 + x4 >= 1") != std::string::npos);
  const IlpModel back = read_lp_model(text);
  CHECK(back.num_variables == 5);
  CHECK(back.rows == m.rows);

  std::stringstream a;
  write_assignment(a, {1, 0, 1});
  CHECK(a.str() == "x0=1\nx1=0\nx2=1\n");
  std::stringstream loose("x2 = 1\nx0=0.9999\n");
  CHECK(read_assignment(loose, 3) == std::vector<char>{1, 0, 1});
  std::stringstream bad("x7=1\n");
  CHECK_THROWS((void)read_assignment(bad, 3));
}

TEST_CASE("bridges") {
  const auto g = from_edges(7, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 5}, {5, 3}, {5, 6}});
  const auto b = bridges(g);
  CHECK(b == std::vector<std::pair<VertexId, VertexId>>{{2, 3}, {5, 6}});
  MultiGraph doubled = from_edges(2, {{0, 1}});
  doubled.add_edge(0, 1);
  CHECK(bridges(doubled).empty());
  CHECK(bridges(fvs::testing::cycle(6)).empty());
}

TEST_CASE("solve_ilp examples") {
  const auto c5 = solve_ilp(fvs::testing::cycle(5));
  CHECK(c5.solution.size() == 1);

  const auto k4 = fvs::testing::complete(4);
  const auto r = solve_ilp(k4);
  CHECK(r.solution.size() == 2);
  CHECK(verify_solution(k4, r.solution.vertices));
  CHECK(r.stats.rounds >= 1);

  const auto two = from_edges(8, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 3}});
  const auto t = solve_ilp(two);
  CHECK(t.solution.size() == 2);
  CHECK(verify_solution(two, t.solution.vertices));
}

TEST_CASE("solve_ilp matches brute force with monotone objectives") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    CAPTURE(seed);
    const auto g = fvs::testing::random_multigraph(seed);
    const auto r = solve_ilp(g);
    CHECK(verify_solution(g, r.solution.vertices));
    CHECK(r.solution.size() == min_fvs_bruteforce(g)->size());
    std::size_t first = 0;
    for (std::size_t rounds : r.stats.component_rounds) {
      for (std::size_t i = first + 1; i < first + rounds; ++i) {
        CHECK(r.stats.pool_sizes[i] > r.stats.pool_sizes[i - 1]);
        CHECK(r.stats.objectives[i] >= r.stats.objectives[i - 1]);
      }
      first += rounds;
    }
    CHECK(first == r.stats.rounds);
  }
}

TEST_CASE("backend failures surface with an incumbent") {
  IlpOptions options;
  options.backend = [](const IlpModel&) -> std::vector<char> { throw std::runtime_error("solver crashed"); };
  const auto g = fvs::testing::petersen();
  try {
    (void)solve_ilp(g, options);
    FAIL("expected IlpError");
  } catch (const IlpError& e) {
    CHECK(verify_solution(g, e.incumbent().vertices));
  }
  options.backend = [](const IlpModel& m) { return std::vector<char>(m.num_variables, 0); };
  CHECK_THROWS_AS((void)solve_ilp(g, options), IlpError);
}
