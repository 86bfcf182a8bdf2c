#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sparsekit/sparsifier.hpp"

namespace sparsekit::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kParseFailure = 3,
  kDisconnected = 4,
  kCapAbort = 5,
  kThresholdExceeded = 6,
  kNumerical = 7,
  kIoFailure = 8,
};

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::string format = "tsv";  // tsv | mtx | vectors
  Algorithm algorithm = Algorithm::kAlmostLinear;
  Mode mode = Mode::kExact;
  int q = 10;
  double eps = 0.05;
  std::uint64_t seed = 0;
  double eta = 0.0;
  int taylor_degree = 0;
  int jl_dim = 0;
  double solver_tol = 1e-10;
  bool strict_resample = false;
  double threshold = 0.3;
  int probes = 20;
  std::string out;    // empty: stdout
  std::string stats;  // empty: none for sparsify/verify, stdout for bench
  bool stats_log = true;

  // bench grid
  std::vector<std::string> families{"complete"};
  std::vector<int> sizes{20, 40, 80};
  std::vector<double> eps_list{0.1};
  std::vector<std::string> algorithms{"almost-linear"};
  std::vector<std::string> modes{"exact"};
  int seeds = 1;
};

int cmd_sparsify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sparsekit::cli
