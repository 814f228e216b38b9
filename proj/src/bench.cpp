#include "fvs/bench.hpp"

#include <algorithm>
#include <cerrno>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>
#include <unordered_map>

#include <json.hpp>

#include "fvs/approx.hpp"
#include "fvs/ilp.hpp"
#include "fvs/pace_io.hpp"

namespace fvs {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

json to_json(const RunRecord& r) {
  const auto& s = r.stats;
  const auto& m = s.reductions;
  json j = {
      {"instance", r.instance},
      {"algorithm", r.algorithm},
      {"outcome", static_cast<int>(r.outcome)},
      {"wall_ms", r.wall_ms},
      {"error", r.error},
      {"solution", r.solution},
      {"nodes_visited", s.nodes_visited},
      {"prunes_by_lb", s.prunes_by_lb},
      {"greedy_steps", s.greedy_steps},
      {"subcubic_calls", s.subcubic_calls},
      {"kernel_calls", s.kernel_calls},
      {"initial_dn", m.initial_dn},
      {"initial_dm", m.initial_dm},
      {"initial_dn_pct", m.initial_dn_pct},
      {"initial_dm_pct", m.initial_dm_pct},
      {"calls", m.calls},
      {"sum_dn", m.sum_dn},
      {"sum_dm", m.sum_dm},
      {"window_calls", m.window_calls},
      {"window_dn", m.window_dn},
      {"window_dm", m.window_dm},
      {"separated_components", m.separated_components},
      {"separated_vertices", m.separated_vertices},
      {"separated_sizes", m.separated_sizes},
  };
  j["solution_size"] = r.solution_size ? json(*r.solution_size) : json(nullptr);
  j["approx_size"] = r.approx_size ? json(*r.approx_size) : json(nullptr);
  return j;
}

RunRecord from_json(const json& j) {
  RunRecord r;
  r.instance = j.at("instance").get<std::string>();
  r.algorithm = j.at("algorithm").get<std::string>();
  r.outcome = static_cast<Outcome>(j.at("outcome").get<int>());
  r.wall_ms = j.at("wall_ms").get<double>();
  r.error = j.at("error").get<std::string>();
  r.solution = j.at("solution").get<std::vector<std::string>>();
  if (!j.at("solution_size").is_null()) r.solution_size = j.at("solution_size").get<std::size_t>();
  if (!j.at("approx_size").is_null()) r.approx_size = j.at("approx_size").get<std::size_t>();
  auto& s = r.stats;
  auto& m = s.reductions;
  s.nodes_visited = j.at("nodes_visited");
  s.prunes_by_lb = j.at("prunes_by_lb");
  s.greedy_steps = j.at("greedy_steps");
  s.subcubic_calls = j.at("subcubic_calls");
  s.kernel_calls = j.at("kernel_calls");
  m.initial_dn = j.at("initial_dn");
  m.initial_dm = j.at("initial_dm");
  m.initial_dn_pct = j.at("initial_dn_pct");
  m.initial_dm_pct = j.at("initial_dm_pct");
  m.calls = j.at("calls");
  m.sum_dn = j.at("sum_dn");
  m.sum_dm = j.at("sum_dm");
  m.window_calls = j.at("window_calls");
  m.window_dn = j.at("window_dn");
  m.window_dm = j.at("window_dm");
  m.separated_components = j.at("separated_components");
  m.separated_vertices = j.at("separated_vertices");
  m.separated_sizes = j.at("separated_sizes").get<std::vector<std::size_t>>();
  return r;
}

std::string instance_name(const std::string& path) { return std::filesystem::path(path).stem().string(); }

bool starts_with(const std::string& s, const char* prefix) { return s.rfind(prefix, 0) == 0; }

// Re-reads the instance and checks a solved record's labels.
void verify_record(RunRecord& r, const std::string& path) {
  if (r.outcome != Outcome::Solved) return;
  try {
    const MultiGraph g = read_instance_file(path);
    std::unordered_map<std::string, VertexId> ids;
    for (VertexId v : g.vertices()) ids.emplace(g.label(v), v);
    std::vector<VertexId> x;
    for (const auto& label : r.solution) {
      const auto it = ids.find(label);
      if (it == ids.end()) throw std::runtime_error("solution names unknown vertex '" + label + "'");
      x.push_back(it->second);
    }
    std::sort(x.begin(), x.end());
    x.erase(std::unique(x.begin(), x.end()), x.end());
    if (x.size() != r.solution.size() || !r.solution_size || *r.solution_size != x.size()) {
      throw std::runtime_error("solution size does not match its labels");
    }
    if (!verify_solution(g, x)) throw std::runtime_error("solution leaves a cycle");
  } catch (const std::exception& e) {
    r.outcome = Outcome::Error;
    r.error = std::string("verification failed: ") + e.what();
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct Worker {
  pid_t pid = -1;
  int fd = -1;
  std::size_t task = 0;
  Clock::time_point start;
  std::string buffer;
  bool killed = false;
};

}  // namespace

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Solved:
      return "solved";
    case Outcome::Timeout:
      return "timeout";
    case Outcome::Error:
      return "error";
  }
  return "error";
}

const std::vector<std::string>& TestSets::set_a() {
  static const std::vector<std::string> names = {
      "hidden_001", "hidden_007", "hidden_012", "hidden_056", "hidden_065", "hidden_083", "hidden_099",
      "hidden_106", "public_011", "public_014", "public_037", "public_069", "public_076", "public_086",
  };
  return names;
}

const std::vector<std::string>& TestSets::set_b() {
  static const std::vector<std::string> names = {
      "hidden_022", "hidden_041", "hidden_068", "hidden_088", "public_035", "public_066", "public_067",
  };
  return names;
}

const std::vector<std::string>& TestSets::set_c() {
  static const std::vector<std::string> names = {
      "hidden_001", "hidden_007", "hidden_012", "hidden_022", "hidden_056", "hidden_065",
      "hidden_068", "hidden_083", "hidden_088", "hidden_099", "hidden_106", "public_011",
      "public_014", "public_035", "public_069", "public_076", "public_086", "public_067",
  };
  return names;
}

RunRecord run_one(const std::string& path, const Algorithm& algo, std::chrono::milliseconds timeout,
                  const std::string& ilp_command) {
  const auto start = Clock::now();
  RunRecord r;
  r.instance = instance_name(path);
  r.algorithm = format_algorithm(algo);
  try {
    const MultiGraph g = read_instance_file(path);
    r.approx_size = approximate(g).size();
    Solution sol;
    if (algo.ilp) {
      IlpOptions options;
      options.time_limit = timeout;
      if (!ilp_command.empty()) options.backend = external_backend(ilp_command);
      try {
        sol = solve_ilp(g, options).solution;
        r.outcome = Outcome::Solved;
      } catch (const IlpError& e) {
        r.outcome = std::string(e.what()) == "time limit exceeded" ? Outcome::Timeout : Outcome::Error;
        r.error = e.what();
      }
    } else {
      BranchConfig cfg = algo.branch;
      cfg.time_limit = timeout;
      const SolveResult result = solve_min(g, cfg);
      r.stats = result.stats;
      sol = result.solution;
      r.outcome = result.status == SolveStatus::Optimal ? Outcome::Solved : Outcome::Timeout;
    }
    if (r.outcome == Outcome::Solved) {
      r.solution_size = sol.size();
      for (VertexId v : sol.vertices) r.solution.push_back(g.label(v));
    }
  } catch (const std::exception& e) {
    r.outcome = Outcome::Error;
    r.error = e.what();
  }
  r.wall_ms = ms_since(start);
  return r;
}

std::vector<std::string> list_instances(const std::string& directory) {
  std::vector<std::string> out;
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    if (!entry.is_regular_file()) continue;
    if (starts_with(entry.path().filename().string(), ".")) continue;
    out.push_back(entry.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<RunRecord> run_suite(const std::string& directory, const SuiteOptions& options) {
  std::vector<Algorithm> algos;
  for (const auto& name : options.algorithms) algos.push_back(parse_algorithm(name));
  if (!std::filesystem::is_directory(directory)) throw std::runtime_error("not a directory: " + directory);
  const auto files = list_instances(directory);

  struct Task {
    std::size_t file;
    std::size_t algo;
  };
  std::vector<Task> tasks;
  for (std::size_t f = 0; f < files.size(); ++f) {
    for (std::size_t a = 0; a < algos.size(); ++a) tasks.push_back({f, a});
  }

  std::vector<RunRecord> records(tasks.size());
  std::vector<Worker> active;
  std::size_t next = 0;
  const int jobs = std::max(1, options.jobs);
  const auto hard_limit = options.timeout + options.grace;

  auto finish = [&](Worker& w, int status) {
    const Task& t = tasks[w.task];
    RunRecord r;
    if (w.killed) {
      r.outcome = Outcome::Timeout;
      r.error = "killed after the time limit";
    } else {
      try {
        r = from_json(json::parse(w.buffer));
      } catch (const std::exception&) {
        r = RunRecord{};
        r.outcome = Outcome::Error;
        r.error = WIFSIGNALED(status) ? "worker killed by signal " + std::to_string(WTERMSIG(status))
                                      : "worker exited with status " + std::to_string(WEXITSTATUS(status));
      }
    }
    r.instance = instance_name(files[t.file]);
    r.algorithm = format_algorithm(algos[t.algo]);
    r.wall_ms = ms_since(w.start);
    verify_record(r, files[t.file]);
    records[w.task] = std::move(r);
  };

  while (next < tasks.size() || !active.empty()) {
    while (next < tasks.size() && static_cast<int>(active.size()) < jobs) {
      int fds[2];
      if (pipe(fds) != 0) throw std::runtime_error("pipe failed");
      std::fflush(nullptr);
      const pid_t pid = fork();
      if (pid < 0) throw std::runtime_error("fork failed");
      if (pid == 0) {
        close(fds[0]);
        for (const auto& w : active) close(w.fd);
        const Task& t = tasks[next];
        const std::string payload =
            to_json(run_one(files[t.file], algos[t.algo], options.timeout, options.ilp_command)).dump();
        std::size_t off = 0;
        while (off < payload.size()) {
          const ssize_t n = write(fds[1], payload.data() + off, payload.size() - off);
          if (n <= 0) _exit(3);
          off += static_cast<std::size_t>(n);
        }
        _exit(0);
      }
      close(fds[1]);
      Worker w;
      w.pid = pid;
      w.fd = fds[0];
      w.task = next++;
      w.start = Clock::now();
      active.push_back(std::move(w));
    }

    std::vector<pollfd> polls;
    for (const auto& w : active) polls.push_back({w.fd, POLLIN, 0});
    const int ready = poll(polls.data(), polls.size(), 20);
    if (ready < 0 && errno != EINTR) throw std::runtime_error("poll failed");

    for (std::size_t i = 0; i < active.size();) {
      Worker& w = active[i];
      bool closed = false;
      if (ready > 0 && (polls[i].revents & (POLLIN | POLLHUP | POLLERR))) {
        char buf[65536];
        const ssize_t n = read(w.fd, buf, sizeof buf);
        if (n > 0) {
          w.buffer.append(buf, static_cast<std::size_t>(n));
        } else if (n == 0 || errno != EINTR) {
          closed = true;
        }
      }
      if (!closed && !w.killed && Clock::now() - w.start > hard_limit) {
        kill(w.pid, SIGKILL);
        w.killed = true;
      }
      if (closed) {
        close(w.fd);
        int status = 0;
        waitpid(w.pid, &status, 0);
        finish(w, status);
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(i));
        polls.erase(polls.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        ++i;
      }
    }
  }

  std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.instance, a.algorithm) < std::tie(b.instance, b.algorithm);
  });
  return records;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns = {
      "instance",       "algorithm",      "outcome",      "wall_ms",     "solution_size",
      "approx_size",    "nodes_visited",  "prunes_by_lb", "greedy_steps", "subcubic_calls",
      "initial_dn",     "initial_dm",     "initial_dn_pct", "initial_dm_pct", "avg_dn",
      "avg_dm",         "avg2040_dn",     "avg2040_dm",   "separated_vertices", "separated_components",
      "error",
  };
  return columns;
}

void write_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : records) {
    const auto& s = r.stats;
    const auto& m = s.reductions;
    const std::vector<std::string> row = {
        csv_field(r.instance),
        csv_field(r.algorithm),
        outcome_name(r.outcome),
        fixed3(r.wall_ms),
        r.solution_size ? std::to_string(*r.solution_size) : "",
        r.approx_size ? std::to_string(*r.approx_size) : "",
        std::to_string(s.nodes_visited),
        std::to_string(s.prunes_by_lb),
        std::to_string(s.greedy_steps),
        std::to_string(s.subcubic_calls),
        std::to_string(m.initial_dn),
        std::to_string(m.initial_dm),
        fixed3(m.initial_dn_pct),
        fixed3(m.initial_dm_pct),
        fixed3(m.avg_dn()),
        fixed3(m.avg_dm()),
        fixed3(m.window_avg_dn()),
        fixed3(m.window_avg_dm()),
        std::to_string(m.separated_vertices),
        std::to_string(m.separated_components),
        csv_field(r.error),
    };
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

GapHistogram gap_histogram(const std::vector<std::pair<std::size_t, std::size_t>>& approx_and_optimum) {
  GapHistogram h;
  for (const auto& [approx, opt] : approx_and_optimum) {
    const std::size_t gap = approx >= opt ? approx - opt : 0;
    ++h.instances;
    if (gap <= 2) {
      ++h.bins[gap];
    } else {
      ++h.bins[3];
    }
    if (static_cast<double>(gap) > 0.1 * static_cast<double>(opt)) ++h.bins[4];
  }
  return h;
}

Report aggregate(const std::vector<RunRecord>& records) {
  Report report;
  const std::array<const std::vector<std::string>*, 3> sets = {&TestSets::set_a(), &TestSets::set_b(),
                                                               &TestSets::set_c()};
  std::map<std::string, std::pair<std::size_t, std::size_t>> per_instance;  // approx, optimum
  for (const auto& r : records) {
    auto& s = report.algorithms[r.algorithm];
    ++s.runs;
    const bool solved = r.outcome == Outcome::Solved;
    if (solved) {
      ++s.solved;
      if (starts_with(r.instance, "public")) ++s.solved_public;
      if (starts_with(r.instance, "hidden")) ++s.solved_hidden;
      if (r.solution_size && r.approx_size) {
        auto [it, inserted] = per_instance.try_emplace(r.instance, *r.approx_size, *r.solution_size);
        if (!inserted) it->second.second = std::min(it->second.second, *r.solution_size);
      }
    }
    for (std::size_t k = 0; k < sets.size(); ++k) {
      if (std::find(sets[k]->begin(), sets[k]->end(), r.instance) == sets[k]->end()) continue;
      s.set_seconds[k] += r.wall_ms / 1000.0;
      ++s.set_present[k];
      if (solved) ++s.set_solved[k];
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& [name, p] : per_instance) pairs.push_back(p);
  report.gaps = gap_histogram(pairs);
  return report;
}

void write_summary(std::ostream& out, const Report& report, const std::vector<std::string>& order) {
  char line[256];
  std::snprintf(line, sizeof line, "%-26s %3s %4s %3s %3s %7s %7s %7s %16s %16s %16s\n", "algorithm", "CC", "deg3",
                "LB", "IC", "solved", "public", "hidden", "set A [s]", "set B [s]", "set C [s]");
  out << line;
  for (const auto& name : order) {
    const auto it = report.algorithms.find(name);
    if (it == report.algorithms.end()) continue;
    const auto& s = it->second;
    const Algorithm algo = parse_algorithm(name);
    auto mark = [&](bool on) { return algo.ilp ? "" : (on ? "x" : "-"); };
    std::array<std::string, 3> sets;
    for (std::size_t k = 0; k < 3; ++k) {
      if (s.set_present[k] == 0) {
        sets[k] = "n/a";
      } else {
        char cell[64];
        std::snprintf(cell, sizeof cell, "%.1f (%zu/%zu)", s.set_seconds[k], s.set_solved[k], s.set_present[k]);
        sets[k] = cell;
      }
    }
    std::snprintf(line, sizeof line, "%-26s %3s %4s %3s %3s %7zu %7zu %7zu %16s %16s %16s\n", name.c_str(),
                  mark(algo.branch.cc_split), mark(algo.branch.subcubic), mark(algo.branch.lower_bound),
                  mark(algo.branch.iterative_compression), s.solved, s.solved_public, s.solved_hidden,
                  sets[0].c_str(), sets[1].c_str(), sets[2].c_str());
    out << line;
  }
  const auto& g = report.gaps;
  out << "\napproximation gap over " << g.instances << " solved instances: 0:" << g.bins[0] << " 1:" << g.bins[1]
      << " 2:" << g.bins[2] << " >2:" << g.bins[3] << " >10%:" << g.bins[4] << '\n';
}

std::vector<double> score_split(const std::vector<std::vector<double>>& measures) {
  std::vector<double> points(measures.size(), 0.0);
  if (measures.empty()) return points;
  const std::size_t tests = measures.front().size();
  for (const auto& row : measures) {
    if (row.size() != tests) throw std::invalid_argument("score_split: algorithms cover different tests");
  }
  for (std::size_t t = 0; t < tests; ++t) {
    double best = measures[0][t];
    for (const auto& row : measures) best = std::max(best, row[t]);
    std::size_t winners = 0;
    for (const auto& row : measures) winners += row[t] == best ? 1 : 0;
    for (std::size_t a = 0; a < measures.size(); ++a) {
      if (measures[a][t] == best) points[a] += 1.0 / static_cast<double>(winners);
    }
  }
  if (tests > 0) {
    for (double& p : points) p = 100.0 * p / static_cast<double>(tests);
  }
  return points;
}

std::vector<std::size_t> score_strict(const std::vector<std::vector<double>>& measures) {
  if (measures.size() != 2) throw std::invalid_argument("score_strict: needs exactly two algorithms");
  if (measures[0].size() != measures[1].size()) throw std::invalid_argument("score_strict: different test lists");
  std::vector<std::size_t> wins(2, 0);
  for (std::size_t t = 0; t < measures[0].size(); ++t) {
    if (measures[0][t] > measures[1][t]) ++wins[0];
    if (measures[1][t] > measures[0][t]) ++wins[1];
  }
  return wins;
}

}  // namespace fvs
