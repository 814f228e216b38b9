#pragma once

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fvs/graph.hpp"

namespace fvs {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Edge-list instance: two whitespace-separated labels per line, '#' starts a
/// comment line, blank lines are skipped. Vertex ids follow first appearance.
[[nodiscard]] MultiGraph parse_instance(std::istream& in);
[[nodiscard]] MultiGraph parse_instance(std::string_view text);
[[nodiscard]] MultiGraph read_instance_file(const std::string& path);

/// Writes g back as an edge list (one line per edge copy, loops as "a a").
void write_instance(std::ostream& out, const MultiGraph& g);

/// One label per line in lexicographic order.
void write_solution(std::ostream& out, const MultiGraph& g, const Solution& sol);
[[nodiscard]] std::string format_solution(const MultiGraph& g, const Solution& sol);

/// Reads a solution file against g. Unknown labels raise ParseError.
[[nodiscard]] Solution parse_solution(std::istream& in, const MultiGraph& g);

}  // namespace fvs
