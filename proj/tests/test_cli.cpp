#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "consensus_lab/io.hpp"

// End-to-end checks against the built binary: exit codes, output files and
// bit-reproducibility of repeated invocations.

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = CONSENSUS_LAB_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("consensus_lab_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args) {
  int status = std::system((kCli + " " + args + " 2>/dev/null").c_str());
  return WEXITSTATUS(status);
}

void write(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

const char* kFigGraph =
    R"({"n": 5, "edges": [[1,2],[1,4],[1,5],[2,3],[2,5],[3,5],[4,5]]})";

}  // namespace

TEST_CASE("analyze writes a report with a nontrivial acceleration range") {
  TempDir dir;
  write(dir.file("g.json"), kFigGraph);
  // delta = 0.15/lambdaN = 0.03
  int rc = run_cli("analyze --graph " + dir.file("g.json") +
                   " --delta 0.03 --out " + dir.path.string());
  CHECK(rc == 0);
  json report = json::parse(consensus_lab::read_file(dir.file("report.json")));
  CHECK(report["d_accel"].get<int>() >= 1);
  CHECK(report["d_bar"].get<int>() == 9);
  CHECK(report["eigenvalues"].size() == 5);
}

TEST_CASE("analyze exit codes: parse, disconnected, stepsize") {
  TempDir dir;
  write(dir.file("bad.json"), "{nope");
  CHECK(run_cli("analyze --graph " + dir.file("bad.json") + " --delta 0.1 --out " +
                dir.path.string()) == 2);

  write(dir.file("split.json"), R"({"n": 4, "edges": [[1,2],[3,4]]})");
  CHECK(run_cli("analyze --graph " + dir.file("split.json") + " --delta 0.1 --out " +
                dir.path.string()) == 3);

  write(dir.file("g.json"), kFigGraph);
  // 2/lambdaN = 0.4 exactly: the admissible interval is open
  CHECK(run_cli("analyze --graph " + dir.file("g.json") + " --delta 0.4 --out " +
                dir.path.string()) == 4);
  CHECK(run_cli("analyze --graph " + dir.file("g.json") + " --delta -0.1 --out " +
                dir.path.string()) == 4);
}

TEST_CASE("simulate produces a converged trace and summary") {
  TempDir dir;
  write(dir.file("g.json"), kFigGraph);
  int rc = run_cli("simulate --graph " + dir.file("g.json") +
                   " --algorithm plain --delta 0.2 --rounds 200 --inputs 1,2,3,4,5" +
                   " --out " + dir.path.string());
  CHECK(rc == 0);

  auto trace = consensus_lab::trace_from_csv(
      consensus_lab::read_file(dir.file("trace.csv")));
  CHECK(trace.states.size() == 201);

  json summary = json::parse(consensus_lab::read_file(dir.file("summary.json")));
  CHECK(summary["final_error"].get<double>() < -36.0);
  CHECK_FALSE(summary["unstable"].get<bool>());
}

TEST_CASE("simulate with zero rounds emits only the k=0 row") {
  TempDir dir;
  write(dir.file("g.json"), kFigGraph);
  CHECK(run_cli("simulate --graph " + dir.file("g.json") +
                " --algorithm plain --delta 0.2 --rounds 0 --inputs 1,2,3,4,5" +
                " --out " + dir.path.string()) == 0);
  auto trace = consensus_lab::trace_from_csv(
      consensus_lab::read_file(dir.file("trace.csv")));
  CHECK(trace.states.size() == 1);
}

TEST_CASE("simulate flags an unstable delayed run but exits 0") {
  TempDir dir;
  write(dir.file("g.json"), kFigGraph);
  // admissible delay at delta=0.1 (=0.5/lambdaN) is 2; d=10 is far past it
  int rc = run_cli("simulate --graph " + dir.file("g.json") +
                   " --algorithm delayed --delta 0.1 --delay 10 --rounds 300" +
                   " --inputs 1,2,3,4,5 --out " + dir.path.string());
  CHECK(rc == 0);
  json summary = json::parse(consensus_lab::read_file(dir.file("summary.json")));
  CHECK(summary["unstable"].get<bool>());
}

TEST_CASE("simulate reads inputs from a file and respects --format json") {
  TempDir dir;
  write(dir.file("g.json"), kFigGraph);
  write(dir.file("inputs.csv"), "1\n2\n3\n4\n5\n");
  int rc = run_cli("simulate --graph " + dir.file("g.json") +
                   " --algorithm tm --rounds 80 --inputs " + dir.file("inputs.csv") +
                   " --format json --out " + dir.path.string());
  CHECK(rc == 0);
  json trace = json::parse(consensus_lab::read_file(dir.file("trace.json")));
  CHECK(trace["states"].size() == 81);

  // wrong input arity is an input error
  CHECK(run_cli("simulate --graph " + dir.file("g.json") +
                " --algorithm plain --delta 0.2 --rounds 10 --inputs 1,2,3 --out " +
                dir.path.string()) == 2);
}

TEST_CASE("sweep writes one trace per cell plus the aggregate") {
  TempDir dir;
  write(dir.file("g.json"), kFigGraph);
  int rc = run_cli("sweep --graph " + dir.file("g.json") +
                   " --delta 0.03 --delays 1,5,10 --rounds 400" +
                   " --inputs 1,2,3,4,5 --out " + dir.path.string());
  CHECK(rc == 0);
  json sweep = json::parse(consensus_lab::read_file(dir.file("sweep.json")));
  REQUIRE(sweep["cells"].size() == 4);
  CHECK(fs::exists(dir.file("trace_d=0.csv")));
  CHECK(fs::exists(dir.file("trace_d=10.csv")));
  CHECK_FALSE(sweep["cells"][3]["stable"].get<bool>());
}

TEST_CASE("compare emits five cells") {
  TempDir dir;
  write(dir.file("g.json"), kFigGraph);
  int rc = run_cli("compare --graph " + dir.file("g.json") +
                   " --rounds 300 --inputs 1,2,3,4,5 --out " + dir.path.string());
  CHECK(rc == 0);
  json compare = json::parse(consensus_lab::read_file(dir.file("compare.json")));
  CHECK(compare["cells"].size() == 5);
}

TEST_CASE("regress converges to the centralized slope") {
  TempDir dir;
  write(dir.file("g.json"), kFigGraph);
  int rc = run_cli("regress --graph " + dir.file("g.json") +
                   " --algorithm plain --delta 0.1 --rounds 1500 --out " +
                   dir.path.string());
  CHECK(rc == 0);
  json result = json::parse(consensus_lab::read_file(dir.file("regress.json")));
  CHECK(result["final_max_deviation"].get<double>() < 1e-6);
}

TEST_CASE("identical invocations are bit-reproducible") {
  TempDir a, b;
  write(a.file("g.json"), kFigGraph);
  write(b.file("g.json"), kFigGraph);
  std::string args = " --algorithm plain --delta 0.1 --rounds 1000 --out ";
  CHECK(run_cli("regress --graph " + a.file("g.json") + args + a.path.string()) == 0);
  CHECK(run_cli("regress --graph " + b.file("g.json") + args + b.path.string()) == 0);
  CHECK(consensus_lab::read_file(a.file("estimates.csv")) ==
        consensus_lab::read_file(b.file("estimates.csv")));
  CHECK(consensus_lab::read_file(a.file("regress.json")) ==
        consensus_lab::read_file(b.file("regress.json")));

  // every output file round-trips through its own parser
  auto back = consensus_lab::dataset_from_csv(
      consensus_lab::dataset_to_csv({1.0 / 3.0}, {2.0 / 7.0}));
  CHECK(back.first[0] == 1.0 / 3.0);
}

TEST_CASE("CONSENSUS_LAB_SEED changes the synthetic dataset") {
  TempDir a, b;
  write(a.file("g.json"), kFigGraph);
  write(b.file("g.json"), kFigGraph);
  std::string args = " --algorithm plain --delta 0.1 --rounds 50 --out ";
  CHECK(std::system(("CONSENSUS_LAB_SEED=1 " + kCli + " regress --graph " +
                     a.file("g.json") + args + a.path.string() + " 2>/dev/null")
                        .c_str()) == 0);
  CHECK(std::system(("CONSENSUS_LAB_SEED=2 " + kCli + " regress --graph " +
                     b.file("g.json") + args + b.path.string() + " 2>/dev/null")
                        .c_str()) == 0);
  json ra = json::parse(consensus_lab::read_file(a.file("regress.json")));
  json rb = json::parse(consensus_lab::read_file(b.file("regress.json")));
  CHECK(ra["slope"].get<double>() != rb["slope"].get<double>());
}
