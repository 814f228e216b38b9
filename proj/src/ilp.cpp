#include "fvs/ilp.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unistd.h>

#include "fvs/approx.hpp"
#include "fvs/instance.hpp"
#include "fvs/reduce.hpp"

namespace fvs {

namespace {

using Mask = std::uint64_t;

struct CoverSearch {
  std::vector<Mask> rows;
  Mask best = 0;
  int best_count = 0;

  // Disjoint unsatisfied rows, restricted to still-allowed variables.
  int packing_bound(Mask chosen, Mask excluded) const {
    Mask used = 0;
    int bound = 0;
    for (Mask row : rows) {
      if (row & chosen) continue;
      const Mask free = row & ~excluded;
      if ((free & used) == 0) {
        used |= free;
        ++bound;
      }
    }
    return bound;
  }

  void search(Mask chosen, Mask excluded, int count) {
    if (count >= best_count) return;
    Mask branch_row = 0;
    int branch_size = 65;
    for (Mask row : rows) {
      if (row & chosen) continue;
      const Mask free = row & ~excluded;
      const int size = std::popcount(free);
      if (size == 0) return;
      if (size < branch_size) {
        branch_size = size;
        branch_row = free;
      }
    }
    if (branch_size == 65) {
      best = chosen;
      best_count = count;
      return;
    }
    if (count + packing_bound(chosen, excluded) >= best_count) return;
    for (Mask rest = branch_row; rest != 0; rest &= rest - 1) {
      const Mask bit = rest & (~rest + 1);
      search(chosen | bit, excluded, count + 1);
      excluded |= bit;
    }
  }
};

int variable_index(const std::string& token) {
  if (token.size() < 2 || token[0] != 'x') return -1;
  int value = 0;
  for (std::size_t i = 1; i < token.size(); ++i) {
    if (token[i] < '0' || token[i] > '9') return -1;
    value = value * 10 + (token[i] - '0');
  }
  return value;
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

using Clock = std::chrono::steady_clock;

std::vector<VertexId> solve_component(const MultiGraph& comp, const IlpBackend& backend, Clock::time_point end,
                                      IlpStats& stats, const MultiGraph& original) {
  const Solution warm = shortest_cycle_warm_start(comp);
  std::vector<CycleConstraint> pool;
  std::set<CycleConstraint> seen;
  for (auto& c : shortest_cycles(comp)) {
    if (seen.insert(c).second) pool.push_back(std::move(c));
  }
  std::vector<char> in_warm(comp.capacity(), 0);
  for (VertexId v : warm.vertices) in_warm[v] = 1;

  while (true) {
    if (Clock::now() >= end) throw IlpError("time limit exceeded", approximate(original));

    // Variables are the vertices that occur in some pooled cycle.
    std::vector<VertexId> vars;
    for (const auto& c : pool) vars.insert(vars.end(), c.vertices.begin(), c.vertices.end());
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    IlpModel model;
    model.num_variables = static_cast<int>(vars.size());
    for (const auto& c : pool) {
      std::vector<int> row;
      for (VertexId v : c.vertices) {
        row.push_back(static_cast<int>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin()));
      }
      model.rows.push_back(std::move(row));
    }
    model.warm_start.assign(vars.size(), 0);
    for (std::size_t i = 0; i < vars.size(); ++i) model.warm_start[i] = in_warm[vars[i]];

    std::vector<char> x;
    try {
      x = backend(model);
    } catch (const std::exception& e) {
      throw IlpError(std::string("ILP backend failed: ") + e.what(), approximate(original));
    }
    if (x.size() != vars.size()) throw IlpError("ILP backend returned a malformed assignment", approximate(original));
    for (const auto& row : model.rows) {
      if (std::none_of(row.begin(), row.end(), [&](int i) { return x[i] != 0; })) {
        throw IlpError("ILP backend returned an infeasible assignment", approximate(original));
      }
    }

    std::vector<VertexId> chosen;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (x[i]) chosen.push_back(vars[i]);
    }
    ++stats.rounds;
    stats.pool_sizes.push_back(pool.size());
    stats.objectives.push_back(chosen.size());

    MultiGraph rest = comp;
    for (VertexId v : chosen) rest.delete_vertex(v);
    const std::size_t before = pool.size();
    for (auto& c : shortest_cycles(rest)) {
      if (seen.insert(c).second) pool.push_back(std::move(c));
    }
    if (pool.size() == before) {
      if (!is_acyclic(rest)) throw std::logic_error("solve_ilp: lazy round added no constraint");
      return chosen;
    }
  }
}

}  // namespace

std::vector<CycleConstraint> shortest_cycles(const MultiGraph& g) {
  std::vector<CycleConstraint> out;
  std::set<std::vector<VertexId>> seen;
  for (VertexId v : g.vertices()) {
    auto cycle = shortest_cycle_through(g, v);
    if (cycle.empty()) continue;
    std::sort(cycle.begin(), cycle.end());
    if (seen.insert(cycle).second) out.push_back({std::move(cycle)});
  }
  return out;
}

std::vector<char> builtin_solve(const IlpModel& model, int variable_cap) {
  const int n = model.num_variables;
  if (n > variable_cap || n > 64) {
    throw std::length_error("builtin ILP backend handles at most " + std::to_string(std::min(variable_cap, 64)) +
                            " variables, model has " + std::to_string(n) + "; configure an external solver");
  }
  CoverSearch s;
  for (const auto& row : model.rows) {
    Mask m = 0;
    for (int i : row) {
      if (i < 0 || i >= n) throw std::runtime_error("ILP row references an unknown variable");
      m |= Mask{1} << i;
    }
    if (m == 0) throw std::runtime_error("ILP model is infeasible (empty row)");
    s.rows.push_back(m);
  }
  std::sort(s.rows.begin(), s.rows.end(), [](Mask a, Mask b) { return std::popcount(a) < std::popcount(b); });

  s.best = n == 64 ? ~Mask{0} : (Mask{1} << n) - 1;
  s.best_count = n;
  if (static_cast<int>(model.warm_start.size()) == n) {
    Mask warm = 0;
    for (int i = 0; i < n; ++i) {
      if (model.warm_start[i]) warm |= Mask{1} << i;
    }
    if (std::all_of(s.rows.begin(), s.rows.end(), [&](Mask r) { return (r & warm) != 0; })) {
      s.best = warm;
      s.best_count = std::popcount(warm);
    }
  }
  // The incumbent is only replaced by strictly smaller covers.
  s.search(0, 0, 0);

  std::vector<char> x(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) x[i] = (s.best >> i) & 1;
  return x;
}

IlpBackend builtin_backend(int variable_cap) {
  return [variable_cap](const IlpModel& model) { return builtin_solve(model, variable_cap); };
}

void write_lp_model(std::ostream& out, const IlpModel& model) {
  out << "\\ feedback vertex set cycle covering model\n";
  out << "Minimize\n obj:";
  for (int i = 0; i < model.num_variables; ++i) out << (i ? " + x" : " x") << i;
  out << "\nSubject To\n";
  for (std::size_t r = 0; r < model.rows.size(); ++r) {
    out << " c" << r << ":";
    for (std::size_t j = 0; j < model.rows[r].size(); ++j) out << (j ? " + x" : " x") << model.rows[r][j];
    out << " >= 1\n";
  }
  out << "Binary\n";
  for (int i = 0; i < model.num_variables; ++i) out << " x" << i << "\n";
  out << "End\n";
}

IlpModel read_lp_model(std::istream& in) {
  IlpModel model;
  enum class Section { None, Objective, Constraints, Binary, End } section = Section::None;
  int max_index = -1;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '\\') continue;
    const std::string key = lowercase(line.substr(first));
    if (key.rfind("minimize", 0) == 0) {
      section = Section::Objective;
      continue;
    }
    if (key.rfind("subject to", 0) == 0 || key == "st") {
      section = Section::Constraints;
      continue;
    }
    if (key.rfind("binar", 0) == 0) {
      section = Section::Binary;
      continue;
    }
    if (key.rfind("end", 0) == 0) {
      section = Section::End;
      break;
    }
    std::istringstream tokens(line);
    std::vector<int> row;
    for (std::string tok; tokens >> tok;) {
      const int idx = variable_index(tok);
      if (idx >= 0) {
        max_index = std::max(max_index, idx);
        if (section == Section::Constraints) row.push_back(idx);
      }
    }
    if (section == Section::Constraints) {
      if (line.find(">=") == std::string::npos) throw std::runtime_error("LP model: expected a '>= 1' row: " + line);
      std::sort(row.begin(), row.end());
      row.erase(std::unique(row.begin(), row.end()), row.end());
      model.rows.push_back(std::move(row));
    }
  }
  if (section != Section::End) throw std::runtime_error("LP model: missing End");
  model.num_variables = max_index + 1;
  return model;
}

void write_assignment(std::ostream& out, const std::vector<char>& x) {
  for (std::size_t i = 0; i < x.size(); ++i) out << 'x' << i << '=' << (x[i] ? 1 : 0) << '\n';
}

std::vector<char> read_assignment(std::istream& in, int num_variables) {
  std::vector<char> x(static_cast<std::size_t>(num_variables), 0);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string name = line.substr(0, eq);
    name.erase(std::remove_if(name.begin(), name.end(), [](unsigned char c) { return std::isspace(c); }), name.end());
    const int idx = variable_index(name);
    if (idx < 0 || idx >= num_variables) throw std::runtime_error("assignment: unknown variable '" + name + "'");
    x[idx] = std::stod(line.substr(eq + 1)) >= 0.5 ? 1 : 0;
  }
  return x;
}

IlpBackend external_backend(std::string command) {
  return [command = std::move(command)](const IlpModel& model) {
    namespace fs = std::filesystem;
    std::string pattern = (fs::temp_directory_path() / "fvs-ilp-XXXXXX").string();
    if (mkdtemp(pattern.data()) == nullptr) throw std::runtime_error("cannot create a scratch directory");
    const fs::path dir(pattern);
    const fs::path model_path = dir / "model.lp";
    const fs::path assignment_path = dir / "assignment.txt";
    const fs::path start_path = dir / "start.txt";
    {
      std::ofstream m(model_path);
      write_lp_model(m, model);
      std::ofstream s(start_path);
      write_assignment(s, model.warm_start);
    }
    const std::string call = command + " '" + model_path.string() + "' '" + assignment_path.string() + "' '" +
                             start_path.string() + "'";
    const int status = std::system(call.c_str());
    std::vector<char> x;
    try {
      if (status != 0) throw std::runtime_error("external solver exited with status " + std::to_string(status));
      std::ifstream a(assignment_path);
      if (!a) throw std::runtime_error("external solver wrote no assignment");
      x = read_assignment(a, model.num_variables);
    } catch (...) {
      fs::remove_all(dir);
      throw;
    }
    fs::remove_all(dir);
    return x;
  };
}

std::vector<std::pair<VertexId, VertexId>> bridges(const MultiGraph& g) {
  std::vector<std::pair<VertexId, VertexId>> out;
  const std::size_t n = g.capacity();
  std::vector<int> disc(n, -1);
  std::vector<int> low(n, 0);
  int timer = 0;
  struct Frame {
    VertexId v;
    VertexId parent;
    std::size_t next;
  };
  for (VertexId s : g.vertices()) {
    if (disc[s] >= 0) continue;
    std::vector<Frame> stack{{s, -1, 0}};
    disc[s] = low[s] = timer++;
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto nbs = g.neighbors(f.v);
      if (f.next < nbs.size()) {
        const Neighbor nb = nbs[f.next++];
        if (nb.vertex == f.parent && nb.multiplicity == 1) continue;
        if (disc[nb.vertex] >= 0) {
          low[f.v] = std::min(low[f.v], disc[nb.vertex]);
        } else {
          disc[nb.vertex] = low[nb.vertex] = timer++;
          stack.push_back({nb.vertex, f.v, 0});
        }
        continue;
      }
      const VertexId v = f.v;
      const VertexId parent = f.parent;
      stack.pop_back();
      if (parent < 0) continue;
      low[parent] = std::min(low[parent], low[v]);
      if (low[v] > disc[parent] && g.multiplicity(parent, v) == 1) {
        out.emplace_back(std::min(parent, v), std::max(parent, v));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

IlpResult solve_ilp(const MultiGraph& g, const IlpOptions& options) {
  const auto end = Clock::now() + options.time_limit;
  const IlpBackend backend = options.backend ? options.backend : builtin_backend();
  IlpResult result;

  Instance inst(g, kUnlimitedBudget);
  ReductionOptions rules;
  rules.double_edge_rule = false;
  reduce_exhaustively(inst, rules);
  std::vector<VertexId> solution = inst.forced;

  MultiGraph h = inst.graph;
  for (const auto& [u, v] : bridges(h)) {
    h.remove_edge(u, v);
    ++result.stats.bridges_removed;
  }
  for (const auto& comp : components(h)) {
    const MultiGraph sub = h.induced_subgraph(comp);
    if (is_acyclic(sub)) continue;
    ++result.stats.components;
    const std::size_t rounds_before = result.stats.rounds;
    for (VertexId local : solve_component(sub, backend, end, result.stats, g)) solution.push_back(comp[local]);
    result.stats.component_rounds.push_back(result.stats.rounds - rounds_before);
  }
  std::sort(solution.begin(), solution.end());
  result.solution = Solution{std::move(solution)};
  return result;
}

}  // namespace fvs
