#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fvs/approx.hpp"
#include "fvs/bench.hpp"
#include "fvs/branch.hpp"
#include "fvs/ilp.hpp"
#include "fvs/pace_io.hpp"

namespace {

using namespace fvs;
using Clock = std::chrono::steady_clock;

enum Status { kOk = 0, kUsage = 1, kTimeout = 2, kIo = 3, kSolverError = 4 };

std::chrono::milliseconds to_ms(double seconds) {
  return std::chrono::milliseconds(static_cast<long long>(seconds * 1000.0 + 0.5));
}

std::string ilp_command_or_env(const std::string& flag) {
  if (!flag.empty()) return flag;
  const char* env = std::getenv(kIlpCommandVariable);
  return env ? env : "";
}

void print_stats(const SearchStats& s) {
  const auto& m = s.reductions;
  std::fprintf(stderr, "nodes_visited %llu\nprunes_by_lb %llu\ngreedy_steps %llu\nsubcubic_calls %llu\n",
               static_cast<unsigned long long>(s.nodes_visited), static_cast<unsigned long long>(s.prunes_by_lb),
               static_cast<unsigned long long>(s.greedy_steps), static_cast<unsigned long long>(s.subcubic_calls));
  std::fprintf(stderr, "initial_dn %zu (%.3f%%)\ninitial_dm %zu (%.3f%%)\n", m.initial_dn, m.initial_dn_pct,
               m.initial_dm, m.initial_dm_pct);
  std::fprintf(stderr, "avg_dn %.3f\navg_dm %.3f\navg2040_dn %.3f\navg2040_dm %.3f\n", m.avg_dn(), m.avg_dm(),
               m.window_avg_dn(), m.window_avg_dm());
  std::fprintf(stderr, "separated_components %zu\nseparated_vertices %zu\n", m.separated_components,
               m.separated_vertices);
}

struct SolveArgs {
  std::string instance;
  std::string algorithm = "cao+cc+deg3+lb";
  double timeout = 1800;
  std::string output;
  bool stats = false;
  std::string ilp_command;
};

int cmd_solve(const SolveArgs& args) {
  Algorithm algo;
  try {
    algo = parse_algorithm(args.algorithm);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  }
  if (args.timeout <= 0) {
    std::cerr << "usage error: timeout must be positive\n";
    return kUsage;
  }
  MultiGraph g;
  try {
    g = read_instance_file(args.instance);
  } catch (const std::exception& e) {
    std::cerr << args.instance << ": " << e.what() << '\n';
    return kIo;
  }

  const auto start = Clock::now();
  Solution sol;
  bool timed_out = false;
  if (algo.ilp) {
    IlpOptions options;
    options.time_limit = to_ms(args.timeout);
    const std::string command = ilp_command_or_env(args.ilp_command);
    if (!command.empty()) options.backend = external_backend(command);
    try {
      const IlpResult result = solve_ilp(g, options);
      sol = result.solution;
      if (args.stats) {
        std::fprintf(stderr, "bridges_removed %zu\ncomponents %zu\nrounds %zu\n", result.stats.bridges_removed,
                     result.stats.components, result.stats.rounds);
      }
    } catch (const IlpError& e) {
      std::cerr << "ilp: " << e.what() << "; upper bound " << e.incumbent().size() << '\n';
      return std::string(e.what()) == "time limit exceeded" ? kTimeout : kSolverError;
    }
  } else {
    BranchConfig cfg = algo.branch;
    cfg.time_limit = to_ms(args.timeout);
    const SolveResult result = solve_min(g, cfg);
    sol = result.solution;
    timed_out = result.status == SolveStatus::Timeout;
    if (args.stats) print_stats(result.stats);
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();

  if (timed_out) {
    std::fprintf(stderr, "timeout after %.3f s; upper bound %zu\n", seconds, sol.size());
    return kTimeout;
  }
  std::fprintf(stderr, "size %zu\ntime %.3f s\n", sol.size(), seconds);
  if (args.output.empty()) {
    write_solution(std::cout, g, sol);
    std::cout.flush();
    return std::cout ? kOk : kIo;
  }
  std::ofstream out(args.output);
  if (out) write_solution(out, g, sol);
  if (!out) {
    std::cerr << args.output << ": cannot write\n";
    return kIo;
  }
  return kOk;
}

int cmd_verify(const std::string& instance, const std::string& solution) {
  MultiGraph g;
  try {
    g = read_instance_file(instance);
  } catch (const std::exception& e) {
    std::cerr << instance << ": " << e.what() << '\n';
    return kIo;
  }
  std::ifstream in(solution);
  if (!in) {
    std::cerr << solution << ": cannot open\n";
    return kIo;
  }
  Solution sol;
  try {
    sol = parse_solution(in, g);
  } catch (const ParseError& e) {
    std::cerr << solution << ": " << e.what() << '\n';
    return 1;
  }
  if (!verify_solution(g, sol.vertices)) {
    std::cerr << "infeasible: " << sol.size() << " vertices leave a cycle\n";
    return 1;
  }
  std::cerr << "feasible: " << sol.size() << " vertices\n";
  return kOk;
}

struct BenchArgs {
  std::string directory;
  std::vector<std::string> algorithms;
  double timeout = 1800;
  int jobs = 1;
  std::string csv;
  std::string ilp_command;
};

int cmd_bench(const BenchArgs& args) {
  SuiteOptions options;
  options.algorithms = args.algorithms.empty() ? comparison_algorithms() : args.algorithms;
  options.timeout = to_ms(args.timeout);
  options.jobs = args.jobs;
  options.ilp_command = ilp_command_or_env(args.ilp_command);
  for (const auto& name : options.algorithms) {
    try {
      (void)parse_algorithm(name);
    } catch (const std::invalid_argument& e) {
      std::cerr << "usage error: " << e.what() << '\n';
      return kUsage;
    }
  }
  if (args.timeout <= 0 || args.jobs < 1) {
    std::cerr << "usage error: timeout and jobs must be positive\n";
    return kUsage;
  }
  if (!std::filesystem::is_directory(args.directory)) {
    std::cerr << args.directory << ": not a directory\n";
    return kIo;
  }
  std::vector<RunRecord> records;
  try {
    records = run_suite(args.directory, options);
  } catch (const std::exception& e) {
    std::cerr << "bench: " << e.what() << '\n';
    return kIo;
  }
  if (args.csv.empty()) {
    write_csv(std::cout, records);
  } else {
    std::ofstream out(args.csv);
    if (out) write_csv(out, records);
    if (!out) {
      std::cerr << args.csv << ": cannot write\n";
      return kIo;
    }
  }
  std::vector<std::string> order;
  for (const auto& name : options.algorithms) order.push_back(format_algorithm(parse_algorithm(name)));
  write_summary(args.csv.empty() ? std::cerr : std::cout, aggregate(records), order);
  return kOk;
}

int cmd_lp_solve(const std::string& model_path, const std::string& out_path, const std::string& start_path) {
  std::ifstream in(model_path);
  if (!in) {
    std::cerr << model_path << ": cannot open\n";
    return kIo;
  }
  try {
    IlpModel model = read_lp_model(in);
    if (!start_path.empty()) {
      std::ifstream start(start_path);
      if (start) model.warm_start = read_assignment(start, model.num_variables);
    }
    const auto x = builtin_solve(model);
    std::ofstream out(out_path);
    write_assignment(out, x);
    if (!out) {
      std::cerr << out_path << ": cannot write\n";
      return kIo;
    }
  } catch (const std::exception& e) {
    std::cerr << "lp-solve: " << e.what() << '\n';
    return kSolverError;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact feedback vertex set solver"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Minimum feedback vertex set of an instance");
  solve_cmd->add_option("instance", solve.instance, "Edge-list instance file")->required();
  solve_cmd->add_option("-a,--algorithm", solve.algorithm, "Algorithm, e.g. cao+cc+deg3+lb, ii+cc+lb, ilp")
      ->capture_default_str();
  solve_cmd->add_option("-t,--timeout", solve.timeout, "Time limit in seconds")->capture_default_str();
  solve_cmd->add_option("-o,--output", solve.output, "Solution file (default: stdout)");
  solve_cmd->add_flag("--stats", solve.stats, "Print search counters to stderr");
  solve_cmd->add_option("--ilp-command", solve.ilp_command,
                        std::string("External ILP solver command (default: $") + kIlpCommandVariable + ")");

  std::string verify_instance, verify_solution_path;
  auto* verify_cmd = app.add_subcommand("verify", "Check that a solution leaves the instance acyclic");
  verify_cmd->add_option("instance", verify_instance, "Edge-list instance file")->required();
  verify_cmd->add_option("solution", verify_solution_path, "Solution file, one label per line")->required();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run algorithms on every instance of a directory");
  bench_cmd->add_option("directory", bench.directory, "Instance directory")->required();
  bench_cmd->add_option("-a,--algorithms", bench.algorithms, "Algorithms (default: all comparison rows)")
      ->delimiter(',');
  bench_cmd->add_option("-t,--timeout", bench.timeout, "Time limit per run in seconds")->capture_default_str();
  bench_cmd->add_option("-j,--jobs", bench.jobs, "Concurrent workers")->capture_default_str();
  bench_cmd->add_option("-o,--output", bench.csv, "CSV file (default: stdout, summary on stderr)");
  bench_cmd->add_option("--ilp-command", bench.ilp_command, "External ILP solver command");

  std::string lp_model, lp_out, lp_start;
  auto* lp_cmd = app.add_subcommand("lp-solve", "Solve a covering LP file with the builtin solver");
  lp_cmd->add_option("model", lp_model, "LP file")->required();
  lp_cmd->add_option("assignment", lp_out, "Output assignment file")->required();
  lp_cmd->add_option("start", lp_start, "Optional starting assignment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (*solve_cmd) return cmd_solve(solve);
  if (*verify_cmd) return cmd_verify(verify_instance, verify_solution_path);
  if (*bench_cmd) return cmd_bench(bench);
  if (*lp_cmd) return cmd_lp_solve(lp_model, lp_out, lp_start);
  return kUsage;
}
