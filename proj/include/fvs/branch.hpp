#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fvs/instance.hpp"
#include "fvs/pivot.hpp"

namespace fvs {

enum class Strategy { Cao, CaoDouble, CaoUndel, CFLLV, KP, II };

enum class KernelCadence { UEmptyOnly, EveryStep };

using KernelHook = std::function<void(Instance&)>;

struct BranchConfig {
  Strategy strategy = Strategy::Cao;
  bool cc_split = false;
  bool subcubic = false;
  bool lower_bound = false;
  bool iterative_compression = false;
  /// Kernelization plug-in; empty means no kernelization.
  KernelHook kernel_hook;
  KernelCadence kernel_cadence = KernelCadence::UEmptyOnly;
  /// Set by the "+kernel" toggle; with an empty hook the calls are counted only.
  bool kernel = false;
  std::chrono::milliseconds time_limit{30 * 60 * 1000};

  /// Throws ContractViolation for combinations no strategy supports
  /// (CFLLV with deg3, KP without deg3, non-positive time limit).
  void validate() const;
};

/// Algorithm name as accepted on the command line, e.g. "cao+cc+deg3+lb".
struct Algorithm {
  bool ilp = false;
  BranchConfig branch;
};

/// Parses "<base>[+cc][+deg3][+lb][+ic][+kernel]" with base one of cao,
/// cao-double, cao-undel, cfllv, kp, ii, or the bare name "ilp". Toggles may
/// come in any order. Throws std::invalid_argument listing the known rows.
[[nodiscard]] Algorithm parse_algorithm(const std::string& name);
/// Canonical name: toggles in the order cc, deg3, lb, ic, kernel.
[[nodiscard]] std::string format_algorithm(const Algorithm& algo);
/// The 22 algorithm rows of the comparison table, in order.
[[nodiscard]] const std::vector<std::string>& comparison_algorithms();

class TimeoutError : public std::runtime_error {
 public:
  TimeoutError() : std::runtime_error("time limit exceeded") {}
};

class Deadline {
 public:
  Deadline() = default;
  explicit Deadline(std::chrono::milliseconds limit)
      : end_(std::chrono::steady_clock::now() + limit), armed_(true) {}
  [[nodiscard]] bool expired() const { return armed_ && std::chrono::steady_clock::now() >= end_; }
  void check() const {
    if (expired()) throw TimeoutError();
  }

 private:
  std::chrono::steady_clock::time_point end_{};
  bool armed_ = false;
};

/// Queue of vertices to branch on first, shared between branch nodes.
struct BranchHints {
  std::shared_ptr<const std::vector<VertexId>> queue;
  std::size_t next = 0;

  BranchHints() = default;
  explicit BranchHints(std::vector<VertexId> vertices)
      : queue(std::make_shared<const std::vector<VertexId>>(std::move(vertices))) {}
  [[nodiscard]] bool empty() const { return !queue || next >= queue->size(); }
  /// Next hint that is live and deletable in inst, advancing past stale
  /// entries; -1 once exhausted.
  VertexId take(const Instance& inst);
};

struct ReductionMeasures {
  std::size_t initial_dn = 0;
  std::size_t initial_dm = 0;
  double initial_dn_pct = 0.0;
  double initial_dm_pct = 0.0;

  std::size_t calls = 0;
  std::size_t sum_dn = 0;
  std::size_t sum_dm = 0;
  /// Calls entered with 20 to 40 live vertices.
  std::size_t window_calls = 0;
  std::size_t window_dn = 0;
  std::size_t window_dm = 0;

  std::size_t separated_components = 0;
  std::size_t separated_vertices = 0;
  std::vector<std::size_t> separated_sizes;

  [[nodiscard]] double avg_dn() const { return calls ? double(sum_dn) / double(calls) : 0.0; }
  [[nodiscard]] double avg_dm() const { return calls ? double(sum_dm) / double(calls) : 0.0; }
  [[nodiscard]] double window_avg_dn() const { return window_calls ? double(window_dn) / double(window_calls) : 0.0; }
  [[nodiscard]] double window_avg_dm() const { return window_calls ? double(window_dm) / double(window_calls) : 0.0; }
};

struct SearchStats {
  std::uint64_t nodes_visited = 0;
  std::uint64_t prunes_by_lb = 0;
  std::uint64_t greedy_steps = 0;
  std::uint64_t subcubic_calls = 0;
  std::uint64_t kernel_calls = 0;
  ReductionMeasures reductions;
};

/// State shared by one search: config, clock and counters.
struct SearchContext {
  const BranchConfig& config;
  Deadline deadline;
  SearchStats stats;

  explicit SearchContext(const BranchConfig& cfg) : config(cfg), deadline(cfg.time_limit) {}
};

/// Solution of size <= inst.budget extending inst.forced (ids of inst), or
/// nothing. Throws TimeoutError when the deadline passes.
[[nodiscard]] std::optional<std::vector<VertexId>> decide(Instance inst, BranchHints hints, SearchContext& ctx);

/// Pivot rule of the configured strategy. May rewrite inst (KP gadgets,
/// half-integral greedy steps) and then returns Rewritten.
[[nodiscard]] PivotAction pick_pivot(Instance& inst, const BranchConfig& cfg);

[[nodiscard]] PivotAction kp_step(Instance& inst);

[[nodiscard]] BranchHints init_hints(const MultiGraph& g, const BranchConfig& cfg);

enum class SolveStatus { Optimal, Timeout };

struct SolveResult {
  SolveStatus status = SolveStatus::Optimal;
  /// Minimum solution, or the heuristic upper bound after a timeout.
  Solution solution;
  SearchStats stats;
  std::chrono::milliseconds elapsed{0};
};

/// Minimum feedback vertex set by iterative deepening on the budget, capped
/// by the heuristic solution.
[[nodiscard]] SolveResult solve_min(const MultiGraph& g, const BranchConfig& cfg);

}  // namespace fvs
