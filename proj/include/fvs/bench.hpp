#pragma once

#include <array>
#include <chrono>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fvs/branch.hpp"

namespace fvs {

enum class Outcome { Solved, Timeout, Error };

[[nodiscard]] const char* outcome_name(Outcome o);

struct RunRecord {
  std::string instance;   ///< file name without extension
  std::string algorithm;  ///< canonical algorithm name
  Outcome outcome = Outcome::Error;
  double wall_ms = 0.0;
  std::optional<std::size_t> solution_size;
  std::optional<std::size_t> approx_size;
  SearchStats stats;
  std::string error;
  /// Labels of the returned solution; not written to CSV.
  std::vector<std::string> solution;
};

/// Named instance groups used for the total-time columns.
struct TestSets {
  static const std::vector<std::string>& set_a();
  static const std::vector<std::string>& set_b();
  static const std::vector<std::string>& set_c();
};

struct SuiteOptions {
  std::vector<std::string> algorithms;
  std::chrono::milliseconds timeout{30 * 60 * 1000};
  int jobs = 1;
  /// Extra time a worker gets past the timeout before it is killed.
  std::chrono::milliseconds grace{2000};
  std::string ilp_command;  ///< external ILP solver; builtin when empty
};

/// Solves one instance file in-process. Never throws for instance or solver
/// problems; they become error records.
[[nodiscard]] RunRecord run_one(const std::string& path, const Algorithm& algo, std::chrono::milliseconds timeout,
                                const std::string& ilp_command = {});

/// Every (instance, algorithm) pair of the directory, each in a forked worker
/// killed after timeout + grace. Solutions are re-verified against a fresh
/// parse of the instance file. Records are sorted by (instance, algorithm).
/// Throws std::invalid_argument for unknown algorithm names before running
/// anything.
[[nodiscard]] std::vector<RunRecord> run_suite(const std::string& directory, const SuiteOptions& options);

/// Instance files of a directory in name order (regular files, hidden files
/// skipped).
[[nodiscard]] std::vector<std::string> list_instances(const std::string& directory);

[[nodiscard]] const std::vector<std::string>& csv_columns();
void write_csv(std::ostream& out, const std::vector<RunRecord>& records);

/// Counts of approximation gaps: 0, 1, 2, more than 2, and more than 10% of
/// the optimum.
struct GapHistogram {
  std::array<std::size_t, 5> bins{};
  std::size_t instances = 0;
};
[[nodiscard]] GapHistogram gap_histogram(const std::vector<std::pair<std::size_t, std::size_t>>& approx_and_optimum);

struct AlgorithmSummary {
  std::size_t runs = 0;
  std::size_t solved = 0;
  std::size_t solved_public = 0;
  std::size_t solved_hidden = 0;
  /// Total wall time in seconds over the records of each set, and how many
  /// of its instances were present / solved.
  std::array<double, 3> set_seconds{};
  std::array<std::size_t, 3> set_present{};
  std::array<std::size_t, 3> set_solved{};
};

struct Report {
  std::map<std::string, AlgorithmSummary> algorithms;
  /// Over instances solved by at least one algorithm.
  GapHistogram gaps;
};

[[nodiscard]] Report aggregate(const std::vector<RunRecord>& records);

/// Human-readable table: one row per algorithm with its toggles, solved
/// counts and set times.
void write_summary(std::ostream& out, const Report& report, const std::vector<std::string>& order);

/// measures[a][t]: value of algorithm a on test t, larger is better.
/// Three or more algorithms: one point per test split among the best, as
/// percentages of all points. Two algorithms: number of tests where each is
/// strictly better.
[[nodiscard]] std::vector<double> score_split(const std::vector<std::vector<double>>& measures);
[[nodiscard]] std::vector<std::size_t> score_strict(const std::vector<std::vector<double>>& measures);

}  // namespace fvs
