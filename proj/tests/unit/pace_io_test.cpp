#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "fvs/oracle.hpp"
#include "fvs/pace_io.hpp"
#include "graphs.hpp"

using namespace fvs;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::string kGolden = std::string(FVS_TEST_DATA_DIR) + "/golden/";

// Edge multiset keyed by labels, for comparing graphs up to id renaming.
std::multiset<std::pair<std::string, std::string>> labelled_edges(const MultiGraph& g) {
  std::multiset<std::pair<std::string, std::string>> out;
  for (VertexId v : g.vertices()) {
    if (g.has_loop(v)) out.emplace(g.label(v), g.label(v));
    for (const auto& nb : g.neighbors(v)) {
      if (nb.vertex < v) continue;
      auto a = g.label(v);
      auto b = g.label(nb.vertex);
      if (b < a) std::swap(a, b);
      for (int i = 0; i < nb.multiplicity; ++i) out.emplace(a, b);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("parse_instance") {
  const auto tri = parse_instance("a b\nb c\nc a\n");
  CHECK(tri.num_vertices() == 3);
  CHECK(tri.num_edges() == 3);
  CHECK(tri.label(0) == "a");

  const auto dbl = parse_instance("# comment\n1 2\n1 2\n");
  CHECK(dbl.num_vertices() == 2);
  CHECK(dbl.multiplicity(0, 1) == 2);

  try {
    (void)parse_instance("x y z\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
  try {
    (void)parse_instance("a b\n\nlonely\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK(parse_instance("").empty());
  CHECK(parse_instance("q q\n").has_loop(0));
}

TEST_CASE("write_solution") {
  const auto g = parse_instance("b a\n10 2\n");
  CHECK(format_solution(g, Solution{}).empty());
  CHECK(format_solution(g, Solution{{0, 1}}) == "a\nb\n");
  CHECK(format_solution(g, Solution{{2, 3}}) == "10\n2\n");
}

TEST_CASE("golden instance normalisation") {
  const auto g = read_instance_file(kGolden + "mixed.graph");
  std::ostringstream out;
  write_instance(out, g);
  CHECK(out.str() == slurp(kGolden + "mixed.normalized"));

  const auto again = parse_instance(out.str());
  std::ostringstream twice;
  write_instance(twice, again);
  CHECK(twice.str() == out.str());
}

TEST_CASE("golden solution file") {
  const auto g = read_instance_file(kGolden + "mixed.graph");
  std::istringstream in(slurp(kGolden + "mixed.solution"));
  const Solution sol = parse_solution(in, g);
  CHECK(sol.size() == 3);
  CHECK(format_solution(g, sol) == slurp(kGolden + "mixed.solution"));
  CHECK(verify_solution(g, sol.vertices));
}

TEST_CASE("parse_solution rejects unknown labels") {
  const auto g = parse_instance("a b\n");
  std::istringstream in("a\nzz\n");
  CHECK_THROWS_AS((void)parse_solution(in, g), ParseError);
}

TEST_CASE("round trip on random graphs") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto g = fvs::testing::random_multigraph(seed);
    std::ostringstream a;
    write_instance(a, g);
    const auto parsed = parse_instance(a.str());
    std::ostringstream b;
    write_instance(b, parsed);
    const auto reparsed = parse_instance(b.str());
    CHECK(labelled_edges(parsed) == labelled_edges(reparsed));
    CHECK(labelled_edges(parsed) == labelled_edges(g));
  }
}

TEST_CASE("missing file") {
  CHECK_THROWS_AS((void)read_instance_file("/nonexistent/graph.txt"), std::runtime_error);
}

TEST_CASE("brute-force oracle") {
  CHECK(min_fvs_bruteforce(fvs::testing::random_tree(2, 12))->size() == 0);
  CHECK(min_fvs_bruteforce(fvs::testing::complete(5))->size() == 3);
  const auto c3c4 = fvs::testing::from_edges(7, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 6}, {6, 3}});
  CHECK(min_fvs_bruteforce(c3c4)->size() == 2);
  for (int n = 3; n <= 8; ++n) CHECK(min_fvs_bruteforce(fvs::testing::cycle(n))->size() == 1);

  const auto k4 = fvs::testing::complete(4);
  const std::vector<char> forbid{1, 1, 1, 0};
  CHECK_FALSE(min_fvs_bruteforce(k4, forbid).has_value());
  CHECK_THROWS_AS((void)min_fvs_bruteforce(fvs::testing::cycle(21)), ContractViolation);
}

TEST_CASE("oracle minimality") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto g = fvs::testing::random_multigraph(seed, {.max_vertices = 9, .max_edges = 18});
    const auto sol = min_fvs_bruteforce(g);
    REQUIRE(sol.has_value());
    CHECK(verify_solution(g, sol->vertices));
    if (sol->size() == 0) continue;
    // No smaller subset works.
    const auto live = g.vertices();
    const std::size_t n = live.size();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) >= sol->size()) continue;
      std::vector<VertexId> x;
      for (std::size_t i = 0; i < n; ++i) {
        if ((mask >> i) & 1u) x.push_back(live[i]);
      }
      CHECK_FALSE(verify_solution(g, x));
    }
  }
}
