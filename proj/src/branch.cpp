#include "fvs/branch.hpp"

#include <algorithm>
#include <sstream>

#include "fvs/approx.hpp"
#include "fvs/halfint.hpp"
#include "fvs/reduce.hpp"
#include "fvs/subcubic.hpp"

namespace fvs {

namespace {

struct BaseName {
  const char* name;
  Strategy strategy;
};

constexpr BaseName kBases[] = {
    {"cao", Strategy::Cao},     {"cao-double", Strategy::CaoDouble}, {"cao-undel", Strategy::CaoUndel},
    {"cfllv", Strategy::CFLLV}, {"kp", Strategy::KP},                {"ii", Strategy::II},
};

std::string known_rows_message(const std::string& name, const std::string& reason) {
  std::ostringstream msg;
  msg << "unknown algorithm '" << name << "' (" << reason << "); known algorithms:";
  for (const auto& row : comparison_algorithms()) msg << "\n  " << row;
  return msg.str();
}

int edges_into_undeletable(const Instance& inst, VertexId v) {
  int count = 0;
  for (const auto& nb : inst.graph.neighbors(v)) {
    if (inst.is_undeletable(nb.vertex)) count += nb.multiplicity;
  }
  return count;
}

bool has_double_edge(const MultiGraph& g, VertexId v) {
  return std::any_of(g.neighbors(v).begin(), g.neighbors(v).end(),
                     [](const Neighbor& nb) { return nb.multiplicity >= 2; });
}

// Deletable vertex maximizing key (smallest id on ties); -1 if none passes.
template <typename Key, typename Filter>
VertexId best_deletable(const Instance& inst, Key key, Filter filter) {
  VertexId best = -1;
  long long best_key = 0;
  for (VertexId v : inst.graph.vertices()) {
    if (inst.is_undeletable(v) || !filter(v)) continue;
    const long long k = key(v);
    if (best < 0 || k > best_key) {
      best = v;
      best_key = k;
    }
  }
  return best;
}

VertexId max_degree_pivot(const Instance& inst) {
  return best_deletable(inst, [&](VertexId v) { return inst.graph.degree(v); }, [](VertexId) { return true; });
}

VertexId most_edges_into_undeletable(const Instance& inst) {
  const VertexId v = best_deletable(
      inst, [&](VertexId x) { return edges_into_undeletable(inst, x); }, [](VertexId) { return true; });
  if (v < 0 || edges_into_undeletable(inst, v) == 0) return max_degree_pivot(inst);
  return v;
}

void record_reduction(SearchStats& stats, std::size_t n_entry, const ReductionOutcome& r, bool first) {
  auto& m = stats.reductions;
  const bool window = n_entry >= 20 && n_entry <= 40;
  if (first) {
    ++m.calls;
    if (window) ++m.window_calls;
  }
  m.sum_dn += r.vertices_removed;
  m.sum_dm += r.edges_removed;
  if (window) {
    m.window_dn += r.vertices_removed;
    m.window_dm += r.edges_removed;
  }
}

// Minimum solution of a separated component within max_budget.
std::optional<std::vector<VertexId>> minimize_component(const Instance& sub, int max_budget, SearchContext& ctx) {
  const BranchHints hints = init_hints(sub.graph, ctx.config);
  for (int k = 0; k <= max_budget; ++k) {
    Instance attempt = sub;
    attempt.budget = k;
    attempt.forced.clear();
    attempt.enqueue_all();
    if (auto found = decide(std::move(attempt), hints, ctx)) return found;
  }
  return std::nullopt;
}

// Minimum solution of a U-free instance: deepening below the heuristic bound.
std::vector<VertexId> minimize_top_level(const Instance& inst, SearchContext& ctx) {
  const Solution upper = approximate(inst.graph);
  const BranchHints hints = init_hints(inst.graph, ctx.config);
  for (int k = 0; k < static_cast<int>(upper.size()); ++k) {
    Instance attempt = inst;
    attempt.budget = k;
    attempt.forced.clear();
    attempt.enqueue_all();
    if (auto found = decide(std::move(attempt), hints, ctx)) return *found;
  }
  return upper.vertices;
}

}  // namespace

void BranchConfig::validate() const {
  if (strategy == Strategy::CFLLV && subcubic) throw ContractViolation("cfllv never dispatches to the subcubic solver");
  if (strategy == Strategy::KP && !subcubic) throw ContractViolation("kp requires the subcubic solver (deg3)");
  if (kernel && strategy != Strategy::II) throw ContractViolation("kernelization is only wired into ii");
  if (time_limit.count() <= 0) throw ContractViolation("time limit must be positive");
}

const std::vector<std::string>& comparison_algorithms() {
  static const std::vector<std::string> rows = {
      "cao+deg3",
      "cfllv+ic",
      "kp+deg3+ic",
      "cao+cc+deg3",
      "cfllv+cc+ic",
      "kp+cc+deg3+ic",
      "cao+cc",
      "ii+cc",
      "ii+cc+kernel",
      "cao+cc+deg3+lb",
      "cao-double+cc+deg3+lb",
      "cao-undel+cc+deg3+lb",
      "cao+cc+deg3+lb+ic",
      "cao-double+cc+deg3+lb+ic",
      "cao-undel+cc+deg3+lb+ic",
      "cfllv+cc+lb+ic",
      "kp+cc+deg3+lb+ic",
      "cao+cc+lb",
      "ii+cc+lb",
      "ii+cc+lb+kernel",
      "ii+cc+deg3+lb",
      "ilp",
  };
  return rows;
}

Algorithm parse_algorithm(const std::string& name) {
  std::vector<std::string> parts;
  std::stringstream in(name);
  for (std::string part; std::getline(in, part, '+');) parts.push_back(part);
  if (parts.empty() || parts[0].empty()) throw std::invalid_argument(known_rows_message(name, "empty name"));

  Algorithm algo;
  if (parts[0] == "ilp") {
    if (parts.size() > 1) throw std::invalid_argument(known_rows_message(name, "ilp takes no toggles"));
    algo.ilp = true;
    return algo;
  }
  const auto* base = std::find_if(std::begin(kBases), std::end(kBases),
                                  [&](const BaseName& b) { return parts[0] == b.name; });
  if (base == std::end(kBases)) throw std::invalid_argument(known_rows_message(name, "unknown base '" + parts[0] + "'"));
  BranchConfig& cfg = algo.branch;
  cfg.strategy = base->strategy;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    bool* flag = nullptr;
    if (parts[i] == "cc") flag = &cfg.cc_split;
    else if (parts[i] == "deg3") flag = &cfg.subcubic;
    else if (parts[i] == "lb") flag = &cfg.lower_bound;
    else if (parts[i] == "ic") flag = &cfg.iterative_compression;
    else if (parts[i] == "kernel") flag = &cfg.kernel;
    if (flag == nullptr) throw std::invalid_argument(known_rows_message(name, "unknown toggle '" + parts[i] + "'"));
    if (*flag) throw std::invalid_argument(known_rows_message(name, "repeated toggle '" + parts[i] + "'"));
    *flag = true;
  }
  try {
    cfg.validate();
  } catch (const ContractViolation& e) {
    throw std::invalid_argument(known_rows_message(name, e.what()));
  }
  return algo;
}

std::string format_algorithm(const Algorithm& algo) {
  if (algo.ilp) return "ilp";
  const BranchConfig& cfg = algo.branch;
  std::string out;
  for (const auto& b : kBases) {
    if (b.strategy == cfg.strategy) out = b.name;
  }
  if (cfg.cc_split) out += "+cc";
  if (cfg.subcubic) out += "+deg3";
  if (cfg.lower_bound) out += "+lb";
  if (cfg.iterative_compression) out += "+ic";
  if (cfg.kernel) out += "+kernel";
  return out;
}

VertexId BranchHints::take(const Instance& inst) {
  while (queue && next < queue->size()) {
    const VertexId v = (*queue)[next++];
    if (v >= 0 && static_cast<std::size_t>(v) < inst.graph.capacity() && inst.graph.is_alive(v) &&
        !inst.is_undeletable(v)) {
      return v;
    }
  }
  return -1;
}

BranchHints init_hints(const MultiGraph& g, const BranchConfig& cfg) {
  if (!cfg.iterative_compression) return {};
  return BranchHints(approximate(g).vertices);
}

PivotAction kp_step(Instance& inst) {
  const MultiGraph& g = inst.graph;
  bool all_tents = true;
  for (VertexId v : g.vertices()) {
    if (inst.is_undeletable(v)) continue;
    if (g.degree(v) != 3 || edges_into_undeletable(inst, v) != 3) all_tents = false;
  }
  if (all_tents) return PivotAction::subcubic();

  for (VertexId v : g.vertices()) {
    if (inst.is_undeletable(v) || g.degree(v) != 3 || g.has_loop(v) || edges_into_undeletable(inst, v) != 2) continue;
    for (const auto& nb : g.neighbors(v)) {
      if (!inst.is_undeletable(nb.vertex) && nb.multiplicity == 1) {
        inst.subdivide_with_gadget(nb.vertex, v);
        return PivotAction::rewritten();
      }
    }
  }

  const auto is_tent = [&](VertexId v) { return g.degree(v) == 3 && edges_into_undeletable(inst, v) == 3; };
  const VertexId v = best_deletable(
      inst, [&](VertexId x) { return edges_into_undeletable(inst, x); }, [&](VertexId x) { return !is_tent(x); });
  if (edges_into_undeletable(inst, v) == 0) {
    return PivotAction::branch(
        best_deletable(inst, [&](VertexId x) { return g.degree(x); }, [&](VertexId x) { return !is_tent(x); }));
  }
  return PivotAction::branch(v);
}

PivotAction pick_pivot(Instance& inst, const BranchConfig& cfg) {
  const MultiGraph& g = inst.graph;
  switch (cfg.strategy) {
    case Strategy::Cao:
      if (cfg.subcubic && is_subcubic(inst)) return PivotAction::subcubic();
      return PivotAction::branch(max_degree_pivot(inst));
    case Strategy::CaoDouble: {
      if (cfg.subcubic && is_subcubic(inst)) return PivotAction::subcubic();
      const VertexId v = best_deletable(
          inst, [&](VertexId x) { return g.degree(x); }, [&](VertexId x) { return has_double_edge(g, x); });
      return PivotAction::branch(v >= 0 ? v : max_degree_pivot(inst));
    }
    case Strategy::CaoUndel:
      if (cfg.subcubic && is_subcubic(inst)) return PivotAction::subcubic();
      return PivotAction::branch(most_edges_into_undeletable(inst));
    case Strategy::CFLLV:
      return PivotAction::branch(most_edges_into_undeletable(inst));
    case Strategy::KP:
      return kp_step(inst);
    case Strategy::II:
      if (cfg.subcubic && is_subcubic(inst)) return PivotAction::subcubic();
      return ii_step(inst);
  }
  return PivotAction::branch(max_degree_pivot(inst));
}

std::optional<std::vector<VertexId>> decide(Instance inst, BranchHints hints, SearchContext& ctx) {
  ctx.deadline.check();
  ++ctx.stats.nodes_visited;
  const BranchConfig& cfg = ctx.config;
  const std::size_t n_entry = inst.graph.num_vertices();
  bool first_reduction = true;

  while (true) {
    record_reduction(ctx.stats, n_entry, reduce_exhaustively(inst), first_reduction);
    first_reduction = false;
    if (inst.infeasible) return std::nullopt;
    if (inst.graph.empty()) return inst.forced;

    if (cfg.kernel && (cfg.kernel_cadence == KernelCadence::EveryStep || !inst.has_undeletable())) {
      ++ctx.stats.kernel_calls;
      if (cfg.kernel_hook) {
        cfg.kernel_hook(inst);
        reduce_exhaustively(inst);
        if (inst.infeasible) return std::nullopt;
        if (inst.graph.empty()) return inst.forced;
      }
    }

    if (cfg.lower_bound && lower_bound_prune(inst)) {
      ++ctx.stats.prunes_by_lb;
      return std::nullopt;
    }

    if (cfg.cc_split) {
      const SplitOutcome split = split_components(
          inst, [&](const Instance& sub, int max_budget) { return minimize_component(sub, max_budget, ctx); });
      auto& m = ctx.stats.reductions;
      m.separated_components += split.components_separated;
      for (std::size_t s : split.separated_sizes) {
        m.separated_vertices += s;
        m.separated_sizes.push_back(s);
      }
      if (inst.infeasible) return std::nullopt;
      if (inst.graph.empty()) return inst.forced;
    }

    PivotAction action;
    const VertexId hinted = cfg.iterative_compression ? hints.take(inst) : -1;
    if (hinted >= 0) {
      action = PivotAction::branch(hinted);
    } else {
      action = pick_pivot(inst, cfg);
    }

    if (action.kind == PivotAction::Kind::Rewritten) {
      ++ctx.stats.greedy_steps;
      continue;
    }
    if (action.kind == PivotAction::Kind::Subcubic) {
      ++ctx.stats.subcubic_calls;
      const auto rest = solve_subcubic(inst);
      if (!rest || static_cast<int>(rest->size()) > inst.budget) return std::nullopt;
      std::vector<VertexId> out = inst.forced;
      out.insert(out.end(), rest->vertices.begin(), rest->vertices.end());
      return out;
    }

    const VertexId v = action.vertex;
    if (v < 0) throw std::logic_error("decide: pivot rule found no deletable vertex");
    {
      Instance taken = inst;
      taken.take_into_solution(v);
      if (auto found = decide(std::move(taken), hints, ctx)) return found;
    }
    inst.make_undeletable(v);
    return decide(std::move(inst), hints, ctx);
  }
}

SolveResult solve_min(const MultiGraph& g, const BranchConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  SearchContext ctx(cfg);
  SolveResult result;

  Instance root(g, kUnlimitedBudget);
  const std::size_t n0 = root.graph.num_vertices();
  const std::size_t m0 = root.graph.num_edges();
  const ReductionOutcome initial = reduce_exhaustively(root);
  auto& m = ctx.stats.reductions;
  m.initial_dn = initial.vertices_removed;
  m.initial_dm = initial.edges_removed;
  m.initial_dn_pct = n0 ? 100.0 * double(initial.vertices_removed) / double(n0) : 0.0;
  m.initial_dm_pct = m0 ? 100.0 * double(initial.edges_removed) / double(m0) : 0.0;

  std::vector<VertexId> solution = root.forced;
  try {
    if (cfg.cc_split) {
      for (const auto& comp : components(root.graph)) {
        const Instance sub = root.extract(comp);
        for (VertexId local : minimize_top_level(sub, ctx)) solution.push_back(comp[local]);
      }
    } else if (!root.graph.empty()) {
      root.forced.clear();
      const auto rest = minimize_top_level(root, ctx);
      solution.insert(solution.end(), rest.begin(), rest.end());
    }
    std::sort(solution.begin(), solution.end());
    result.solution = Solution{std::move(solution)};
  } catch (const TimeoutError&) {
    result.status = SolveStatus::Timeout;
    result.solution = approximate(g);
    std::sort(result.solution.vertices.begin(), result.solution.vertices.end());
  }
  result.stats = std::move(ctx.stats);
  result.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  return result;
}

}  // namespace fvs
