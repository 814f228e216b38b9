#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "fvs/pace_io.hpp"
#include "graphs.hpp"

namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    std::string tmpl = (fs::temp_directory_path() / "fvs-cli-XXXXXX").string();
    dir = mkdtemp(tmpl.data());
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string file(const std::string& name) const { return (dir / name).string(); }
  std::string put(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return file(name);
  }
  std::string put(const std::string& name, const fvs::MultiGraph& g) const {
    std::ostringstream out;
    fvs::write_instance(out, g);
    return put(name, out.str());
  }
  std::string read(const std::string& name) const {
    std::ifstream in(dir / name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

int run(const std::string& args, const std::string& env = {}) {
  const std::string cmd = env + " " + FVS_CLI_PATH + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("solve and verify") {
  Scratch s;
  const auto c5 = s.put("c5.graph", fvs::testing::cycle(5));
  CHECK(run("solve " + c5 + " -a cao+cc+deg3+lb -o " + s.file("c5.sol")) == 0);
  CHECK(s.read("c5.sol").size() == 2);
  CHECK(run("verify " + c5 + " " + s.file("c5.sol")) == 0);
  CHECK(run("verify " + c5 + " " + s.put("empty.sol", "")) == 1);
  CHECK(run("verify " + c5 + " " + s.put("unknown.sol", "zzz\n")) == 1);
  CHECK(run("verify " + s.file("missing.graph") + " " + s.file("c5.sol")) == 3);
  CHECK(run("verify " + c5 + " " + s.file("missing.sol")) == 3);
  CHECK(run("solve " + s.file("missing.graph")) == 3);
  CHECK(run("solve " + c5 + " -a frobnicate") == 1);
  CHECK(run("solve " + c5 + " -a cfllv+deg3") == 1);
  CHECK(run("") == 1);
}

TEST_CASE("timeout reports an upper bound") {
  Scratch s;
  const auto hard = s.put("hard.graph", fvs::testing::random_simple_graph(3, 120, 400));
  CHECK(run("solve " + hard + " -a cao -t 0.001") == 2);
}

TEST_CASE("external ILP command") {
  Scratch s;
  const auto petersen = s.put("petersen.graph", fvs::testing::petersen());
  const std::string env = std::string("FVS_ILP_COMMAND='") + FVS_CLI_PATH + " lp-solve'";
  CHECK(run("solve " + petersen + " -a ilp -o " + s.file("p.sol"), env) == 0);
  CHECK(run("verify " + petersen + " " + s.file("p.sol")) == 0);
  std::istringstream lines(s.read("p.sol"));
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  CHECK(count == 3);
  CHECK(run("solve " + petersen + " -a ilp", "FVS_ILP_COMMAND=/bin/false") == 4);
}

TEST_CASE("bench") {
  Scratch s;
  fs::create_directory(s.dir / "empty");
  CHECK(run("bench " + s.file("empty") + " -a cao,ilp -o " + s.file("empty.csv")) == 0);
  const std::string header = s.read("empty.csv");
  CHECK(header.rfind("instance,algorithm,outcome,", 0) == 0);
  CHECK(std::count(header.begin(), header.end(), '\n') == 1);

  fs::create_directory(s.dir / "one");
  s.put("one/k5.graph", fvs::testing::complete(5));
  CHECK(run("bench " + s.file("one") + " -a cao+cc,ilp -t 10 -o " + s.file("one.csv")) == 0);
  const std::string csv = s.read("one.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(csv.find("k5,cao+cc,solved,") != std::string::npos);
  CHECK(csv.find("k5,ilp,solved,") != std::string::npos);

  CHECK(run("bench " + s.file("one") + " -a cao,frobnicate -o " + s.file("bad.csv")) == 1);
  CHECK_FALSE(fs::exists(s.dir / "bad.csv"));
}
