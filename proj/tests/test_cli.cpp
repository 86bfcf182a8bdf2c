#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sparsekit/cli.hpp"
#include "sparsekit/graph_io.hpp"
#include "sparsekit/graphs.hpp"
#include "sparsekit/stats.hpp"

using namespace sparsekit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "sparsekit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("sparsekit-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string write_graph(const TempDir& dir, const std::string& name, const WeightedGraph& g) {
  const std::string p = dir.file(name);
  save_graph(p, g, GraphFormat::kTsv);
  return p;
}

std::string write_text(const TempDir& dir, const std::string& name, const std::string& text) {
  const std::string p = dir.file(name);
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int shell_exit(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(invoke({}).code == cli::kUsage);
  CHECK(invoke({"sparsify"}).code == cli::kUsage);
  CHECK(invoke({"sparsify", "x.tsv", "--bogus"}).code == cli::kUsage);
  CHECK(invoke({"sparsify", "x.tsv", "--mode", "slow"}).code == cli::kUsage);
  TempDir dir;
  const std::string g = write_graph(dir, "k5.tsv", complete_graph(5));
  CHECK(invoke({"sparsify", g, "--q", "8"}).code == cli::kUsage);
  CHECK(invoke({"sparsify", g, "--eps", "0.5"}).code == cli::kUsage);
  CHECK(invoke({"sparsify", g, "--algo", "rbss", "--mode", "fast"}).code == cli::kUsage);
  CHECK(invoke({"--help"}).code == cli::kOk);
}

TEST_CASE("malformed edge line exits 3 and names the line") {
  TempDir dir;
  const std::string p = write_text(dir, "bad.tsv", "0\t1\t1\n1\t2\t1\n2\tx\t1\n");
  const Outcome o = invoke({"sparsify", p});
  CHECK(o.code == cli::kParseFailure);
  CHECK(o.err.find("line 3") != std::string::npos);
}

TEST_CASE("disconnected input exits 4") {
  TempDir dir;
  const std::string p = write_text(dir, "two.tsv", "0\t1\t1\n2\t3\t1\n");
  CHECK(invoke({"sparsify", p}).code == cli::kDisconnected);
}

TEST_CASE("missing input and unwritable output exit 8") {
  TempDir dir;
  CHECK(invoke({"sparsify", dir.file("nope.tsv")}).code == cli::kIoFailure);
  const std::string g = write_graph(dir, "k5.tsv", complete_graph(5));
  CHECK(invoke({"sparsify", g, "--eps", "0.1", "--out", dir.file("no/such/dir.tsv")}).code ==
        cli::kIoFailure);
}

TEST_CASE("verify: identical graphs pass, a doubled graph fails the threshold") {
  TempDir dir;
  const WeightedGraph g = grid_graph(3, 4);
  std::vector<Edge> doubled;
  for (Edge e : g.edges()) {
    e.w *= 2.0;
    doubled.push_back(e);
  }
  const std::string a = write_graph(dir, "g.tsv", g);
  const std::string b = write_graph(dir, "g2.tsv", WeightedGraph(g.n_vertices(), doubled));

  const Outcome same = invoke({"verify", a, a});
  CHECK(same.code == cli::kOk);
  const auto rec = nlohmann::json::parse(same.out);
  CHECK(rec["epsilon_achieved"].get<double>() <= 1e-12);
  CHECK(rec["pass"].get<bool>());

  const Outcome twice = invoke({"verify", a, b, "--threshold", "0.5"});
  CHECK(twice.code == cli::kThresholdExceeded);
  CHECK(nlohmann::json::parse(twice.out)["epsilon_achieved"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("verify rejects mismatched vertex sets") {
  TempDir dir;
  const std::string a = write_graph(dir, "a.tsv", complete_graph(4));
  const std::string b = write_graph(dir, "b.tsv", complete_graph(5));
  CHECK(invoke({"verify", a, b}).code == cli::kUsage);
}

TEST_CASE("K30 run ends past the barrier-gap target") {
  TempDir dir;
  const std::string g = write_graph(dir, "k30.tsv", complete_graph(30));
  const Outcome o = invoke({"sparsify", g, "--eps", "0.1", "--seed", "3", "--out",
                            dir.file("h.tsv"), "--stats", "-"});
  REQUIRE(o.code == cli::kOk);
  const auto rec = nlohmann::json::parse(o.out);
  const double gap = rec["final_u"].get<double>() - rec["final_ell"].get<double>();
  CHECK(gap >= 4.0 * std::pow(2.0 * 29, 0.1));
  CHECK(rec["n"] == 29);
  CHECK(rec["m"] == 435);
  CHECK(rec["log"].size() == rec["iterations"].get<std::size_t>());
  const WeightedGraph h = load_graph(dir.file("h.tsv"), GraphFormat::kTsv);
  CHECK(static_cast<std::int64_t>(h.edge_count()) == rec["nonzero_count"].get<std::int64_t>());
}

TEST_CASE("same seed gives identical output and stats apart from the wall clock") {
  TempDir dir;
  const std::string g = write_graph(dir, "grid.tsv", grid_graph(4, 4));
  for (const std::string mode : {"exact", "fast"}) {
    std::vector<std::string> outs;
    std::vector<nlohmann::json> stats;
    for (int k = 0; k < 2; ++k) {
      const std::string out = dir.file(mode + std::to_string(k) + ".tsv");
      const std::string st = dir.file(mode + std::to_string(k) + ".json");
      REQUIRE(invoke({"sparsify", g, "--eps", "0.1", "--mode", mode, "--seed", "9", "--out", out,
                      "--stats", st})
                  .code == cli::kOk);
      outs.push_back(slurp(out));
      stats.push_back(without_wall_clock(nlohmann::json::parse(slurp(st))));
    }
    CHECK(outs[0] == outs[1]);
    CHECK(stats[0].dump() == stats[1].dump());
  }
}

TEST_CASE("general vector input writes one scalar per vector") {
  TempDir dir;
  std::ostringstream v;
  write_vectors(v, Eigen::MatrixXd::Identity(3, 3));
  const std::string p = write_text(dir, "v.txt", v.str());
  const Outcome o = invoke({"sparsify", p, "--format", "vectors", "--eps", "0.1"});
  REQUIRE(o.code == cli::kOk);
  std::istringstream in(o.out);
  int lines = 0;
  for (std::string s; std::getline(in, s);) lines += s.empty() ? 0 : 1;
  CHECK(lines == 3);
  CHECK(invoke({"sparsify", p, "--format", "vectors", "--mode", "fast"}).code == cli::kUsage);
}

TEST_CASE("bench emits one record per cell") {
  const Outcome o = invoke({"bench", "--family", "complete", "--sizes", "20,40,80"});
  REQUIRE(o.code == cli::kOk);
  std::istringstream in(o.out);
  std::vector<int> sizes;
  for (std::string s; std::getline(in, s);) {
    const auto rec = nlohmann::json::parse(s);
    CHECK(rec["record"] == "bench");
    sizes.push_back(rec["size"].get<int>());
  }
  CHECK(sizes == std::vector<int>{20, 40, 80});
}

TEST_CASE("exact and fast sample counts on the same seed stay within 2x") {
  const Outcome o = invoke({"bench", "--family", "grid", "--sizes", "16", "--modes", "exact,fast",
                            "--seed", "4"});
  REQUIRE(o.code == cli::kOk);
  std::istringstream in(o.out);
  std::vector<double> samples;
  for (std::string s; std::getline(in, s);) {
    samples.push_back(nlohmann::json::parse(s)["total_samples"].get<double>());
  }
  REQUIRE(samples.size() == 2);
  CHECK(samples[1] <= 2.0 * samples[0]);
  CHECK(samples[0] <= 2.0 * samples[1]);
}

TEST_CASE("the installed binary reports the same exit codes") {
  TempDir dir;
  const std::string bin = SPARSEKIT_BINARY;
  const std::string bad = write_text(dir, "bad.tsv", "0 1 1\n1 z 1\n");
  const std::string quiet = " >/dev/null 2>&1";
  CHECK(shell_exit(bin + quiet) == cli::kUsage);
  CHECK(shell_exit(bin + " sparsify " + bad + quiet) == cli::kParseFailure);
  const std::string g = write_graph(dir, "k6.tsv", complete_graph(6));
  CHECK(shell_exit(bin + " sparsify " + g + " --eps 0.1" + quiet) == cli::kOk);
  CHECK(shell_exit(bin + " verify " + g + " " + g + quiet) == cli::kOk);
}
