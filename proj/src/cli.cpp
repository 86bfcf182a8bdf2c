#include "sparsekit/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sparsekit/error.hpp"
#include "sparsekit/graph_io.hpp"
#include "sparsekit/graphs.hpp"
#include "sparsekit/stats.hpp"
#include "sparsekit/vectorset.hpp"

namespace sparsekit::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return kUsage;
    case ErrorCode::kMissingProvenance: return kUsage;
    case ErrorCode::kStructural: return kParseFailure;
    case ErrorCode::kParse: return kParseFailure;
    case ErrorCode::kDisconnected: return kDisconnected;
    case ErrorCode::kBarrierViolation: return kNumerical;
    case ErrorCode::kSolverFailure: return kNumerical;
    case ErrorCode::kIo: return kIoFailure;
  }
  return kInternal;
}

// Writes to `path`, or to `fallback` when path is "-" (or empty and a
// fallback is wanted).
void emit(const std::string& path, std::ostream& fallback,
          const std::string& text, bool append = false) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream f(path, append ? std::ios::app : std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  f << text;
  if (!f) throw Error(ErrorCode::kIo, "write failed for '" + path + "'");
}

RunOptions run_options(const RunConfig& cfg) {
  RunOptions opt;
  opt.q = cfg.q;
  opt.eps = cfg.eps;
  opt.mode = cfg.mode;
  opt.seed = cfg.seed;
  opt.strict_resample = cfg.strict_resample;
  opt.estimator.eta = cfg.eta;
  opt.estimator.taylor_degree = cfg.taylor_degree;
  opt.estimator.jl_dim = cfg.jl_dim;
  opt.estimator.solver_tol = cfg.solver_tol;
  return opt;
}

SparsifierResult sparsify(const VectorSet& vs, const RunConfig& cfg) {
  if (cfg.algorithm == Algorithm::kRandomizedBss) {
    if (cfg.mode != Mode::kExact) {
      throw Error(ErrorCode::kInvalidArgument, "rbss runs in exact mode only");
    }
    return run_randomized_bss(vs, cfg.eps, cfg.seed);
  }
  return run_almost_linear(vs, run_options(cfg));
}

WeightedGraph bench_graph(Family family, int n, std::uint64_t seed) {
  GeneratorParams p;
  switch (family) {
    case Family::kComplete:
      p.n = n;
      break;
    case Family::kGrid:
      p.rows = std::max(1, static_cast<int>(std::floor(std::sqrt(n))));
      p.cols = (n + p.rows - 1) / p.rows;
      break;
    case Family::kBarbell:
      p.left = n / 2;
      p.right = n - n / 2;
      break;
    case Family::kErdosRenyi:
      p.n = n;
      p.p = std::min(1.0, 3.0 * std::log(std::max(n, 2)) / n);
      break;
  }
  return generate(family, p, seed).graph;
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "sparsekit: error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "sparsekit: internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace

int cmd_sparsify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (cfg.inputs.size() != 1) {
      throw Error(ErrorCode::kInvalidArgument, "sparsify takes one input file");
    }
    const auto t0 = Clock::now();
    std::optional<WeightedGraph> g;
    std::optional<VectorSet> vs;
    if (cfg.format == "vectors") {
      std::ifstream in(cfg.inputs[0]);
      if (!in) throw Error(ErrorCode::kIo, "cannot open '" + cfg.inputs[0] + "'");
      vs.emplace(read_vectors(in));
    } else {
      g = load_graph(cfg.inputs[0], parse_graph_format(cfg.format));
      vs.emplace(from_graph(*g));
    }
    const SparsifierResult res = sparsify(*vs, cfg);

    std::ostringstream body;
    if (g) {
      const WeightedGraph h = extract_sparsifier(*g, res);
      if (cfg.format == "mtx") {
        write_matrix_market(body, h);
      } else {
        write_edge_list(body, h);
      }
    } else {
      write_scalars(body, res.rescaled_scalars());
    }
    emit(cfg.out, out, body.str());

    if (!cfg.stats.empty()) {
      const RunShape shape{g ? g->n_vertices() : 0, vs->count()};
      const auto rec = sparsify_record(res, shape, cfg.stats_log, seconds_since(t0));
      emit(cfg.stats, out, rec.dump() + "\n");
    }
    if (res.aborted) {
      err << "sparsekit: run aborted: " << res.abort_reason << '\n';
      return static_cast<int>(kCapAbort);
    }
    return static_cast<int>(kOk);
  });
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (cfg.inputs.size() != 2) {
      throw Error(ErrorCode::kInvalidArgument,
                  "verify takes the original graph and the sparsifier");
    }
    if (cfg.format == "vectors") {
      throw Error(ErrorCode::kInvalidArgument, "verify works on graphs only");
    }
    const GraphFormat fmt = parse_graph_format(cfg.format);
    const WeightedGraph g = load_graph(cfg.inputs[0], fmt);
    const WeightedGraph h = load_graph(cfg.inputs[1], fmt);
    const VerificationReport rep = verify_sparsifier(g, h, cfg.probes, cfg.seed);
    const std::string line = verify_record(rep, cfg.threshold).dump() + "\n";
    out << line;
    if (!cfg.stats.empty() && cfg.stats != "-") emit(cfg.stats, out, line);
    return static_cast<int>(rep.epsilon_achieved <= cfg.threshold ? kOk
                                                                  : kThresholdExceeded);
  });
}

int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::ostringstream lines;
    int status = kOk;
    for (const std::string& fam : cfg.families) {
      const Family family = parse_family(fam);
      for (int n : cfg.sizes) {
        for (double eps : cfg.eps_list) {
          for (const std::string& algo : cfg.algorithms) {
            for (const std::string& mode : cfg.modes) {
              for (int k = 0; k < cfg.seeds; ++k) {
                RunConfig cell = cfg;
                cell.eps = eps;
                cell.algorithm = parse_algorithm(algo);
                cell.mode = parse_mode(mode);
                cell.seed = cfg.seed + static_cast<std::uint64_t>(k);
                const auto t0 = Clock::now();
                const WeightedGraph g = bench_graph(family, n, cell.seed);
                const VectorSet vs = from_graph(g);
                const SparsifierResult res = sparsify(vs, cell);
                const WeightedGraph h = extract_sparsifier(g, res);
                const VerificationReport rep =
                    verify_sparsifier(g, h, 0, cell.seed);
                auto rec = sparsify_record(
                    res, {g.n_vertices(), static_cast<int>(g.edge_count())},
                    false, 0.0);
                rec["record"] = "bench";
                rec["family"] = to_string(family);
                rec["size"] = n;
                rec["edges_out"] = h.edge_count();
                rec["lambda_lo"] = rep.lambda_lo;
                rec["lambda_hi"] = rep.lambda_hi;
                rec["epsilon_achieved"] = rep.epsilon_achieved;
                rec[kWallClockField] = seconds_since(t0);
                lines << rec.dump() << '\n';
                if (res.aborted) status = kCapAbort;
              }
            }
          }
        }
      }
    }
    emit(cfg.stats, out, lines.str());
    return status;
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linear-sized spectral sparsifiers by barrier-guided batch sampling",
               "sparsekit"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string algo = "almost-linear";
  std::string mode = "exact";

  auto add_run_flags = [&](CLI::App* sub) {
    sub->add_option("--algo", algo, "almost-linear | rbss")
        ->check(CLI::IsMember({"almost-linear", "rbss"}));
    sub->add_option("--mode", mode, "exact | fast")
        ->check(CLI::IsMember({"exact", "fast"}));
    sub->add_option("--q", cfg.q, "potential order (integer >= 10)");
    sub->add_option("--eps", cfg.eps, "accuracy, in (0, 0.1]");
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--eta", cfg.eta, "fast mode: separation (default from schedule)");
    sub->add_option("--taylor-degree", cfg.taylor_degree, "fast mode: override T");
    sub->add_option("--jl-dim", cfg.jl_dim, "fast mode: sketch dimension");
    sub->add_option("--solver-tol", cfg.solver_tol, "fast mode: relative residual");
    sub->add_flag("--strict-resample", cfg.strict_resample,
                  "redraw batches that break the half-barrier event");
  };

  CLI::App* sp = app.add_subcommand("sparsify", "sparsify a graph or vector set");
  sp->add_option("input", cfg.inputs, "input file")->required()->expected(1);
  sp->add_option("--format", cfg.format, "tsv | mtx | vectors")
      ->check(CLI::IsMember({"tsv", "mtx", "vectors"}));
  add_run_flags(sp);
  sp->add_option("--out", cfg.out, "output path (default stdout)");
  sp->add_option("--stats", cfg.stats, "stats record path ('-' for stdout)");
  sp->add_flag("!--no-log", cfg.stats_log, "omit the per-iteration log from stats");

  CLI::App* vf = app.add_subcommand("verify", "check a sparsifier against its graph");
  vf->add_option("graphs", cfg.inputs, "original and sparsifier")->required()->expected(2);
  vf->add_option("--format", cfg.format, "tsv | mtx")
      ->check(CLI::IsMember({"tsv", "mtx"}));
  vf->add_option("--threshold", cfg.threshold, "largest accepted epsilon");
  vf->add_option("--seed", cfg.seed, "probe seed");
  vf->add_option("--probes", cfg.probes, "random quadratic-form probes");
  vf->add_option("--stats", cfg.stats, "also write the record here");

  CLI::App* bn = app.add_subcommand("bench", "generate -> sparsify -> verify sweep");
  bn->add_option("--family", cfg.families, "complete,grid,barbell,erdos_renyi")
      ->delimiter(',');
  bn->add_option("--sizes", cfg.sizes, "vertex counts")->delimiter(',');
  bn->add_option("--eps-list", cfg.eps_list, "accuracies")->delimiter(',');
  bn->add_option("--algos", cfg.algorithms, "algorithms")->delimiter(',');
  bn->add_option("--modes", cfg.modes, "modes")->delimiter(',');
  bn->add_option("--seeds", cfg.seeds, "seeds per cell");
  bn->add_option("--q", cfg.q, "potential order");
  bn->add_option("--seed", cfg.seed, "first seed");
  bn->add_option("--stats", cfg.stats, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  return guarded(err, [&] {
    cfg.algorithm = parse_algorithm(algo);
    cfg.mode = parse_mode(mode);
    if (sp->parsed()) {
      cfg.command = "sparsify";
      return cmd_sparsify(cfg, out, err);
    }
    if (vf->parsed()) {
      cfg.command = "verify";
      return cmd_verify(cfg, out, err);
    }
    cfg.command = "bench";
    return cmd_bench(cfg, out, err);
  });
}

}  // namespace sparsekit::cli
