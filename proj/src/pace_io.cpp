#include "fvs/pace_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace fvs {

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

std::unordered_map<std::string, VertexId> label_index(const MultiGraph& g) {
  std::unordered_map<std::string, VertexId> index;
  for (VertexId v : g.vertices()) index.emplace(g.label(v), v);
  return index;
}

}  // namespace

MultiGraph parse_instance(std::istream& in) {
  MultiGraph g;
  std::unordered_map<std::string, VertexId> ids;
  auto intern = [&](std::string_view token) {
    auto [it, inserted] = ids.try_emplace(std::string(token), -1);
    if (inserted) it->second = g.add_vertex(std::string(token));
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_tokens(line);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    if (tokens.size() != 2) {
      throw ParseError(line_no, "expected 2 vertex labels, found " + std::to_string(tokens.size()));
    }
    const VertexId u = intern(tokens[0]);
    const VertexId v = intern(tokens[1]);
    g.add_edge(u, v);
  }
  return g;
}

MultiGraph parse_instance(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_instance(in);
}

MultiGraph read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  return parse_instance(in);
}

void write_instance(std::ostream& out, const MultiGraph& g) {
  for (VertexId v : g.vertices()) {
    if (g.has_loop(v)) out << g.label(v) << ' ' << g.label(v) << '\n';
    std::vector<Neighbor> later;
    for (const auto& nb : g.neighbors(v)) {
      if (nb.vertex > v) later.push_back(nb);
    }
    std::sort(later.begin(), later.end(), [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
    for (const auto& nb : later) {
      for (int i = 0; i < nb.multiplicity; ++i) out << g.label(v) << ' ' << g.label(nb.vertex) << '\n';
    }
  }
}

void write_solution(std::ostream& out, const MultiGraph& g, const Solution& sol) {
  std::vector<std::string> labels;
  labels.reserve(sol.size());
  for (VertexId v : sol.vertices) labels.push_back(g.label(v));
  std::sort(labels.begin(), labels.end());
  for (const auto& l : labels) out << l << '\n';
}

std::string format_solution(const MultiGraph& g, const Solution& sol) {
  std::ostringstream out;
  write_solution(out, g, sol);
  return out.str();
}

Solution parse_solution(std::istream& in, const MultiGraph& g) {
  const auto index = label_index(g);
  Solution sol;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_tokens(line);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    if (tokens.size() != 1) throw ParseError(line_no, "expected one vertex label per line");
    const auto it = index.find(std::string(tokens[0]));
    if (it == index.end()) throw ParseError(line_no, "unknown vertex '" + std::string(tokens[0]) + "'");
    sol.vertices.push_back(it->second);
  }
  std::sort(sol.vertices.begin(), sol.vertices.end());
  sol.vertices.erase(std::unique(sol.vertices.begin(), sol.vertices.end()), sol.vertices.end());
  return sol;
}

}  // namespace fvs
