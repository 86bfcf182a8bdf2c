#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sparsekit/fastpath.hpp"
#include "sparsekit/potential.hpp"
#include "sparsekit/sampling.hpp"
#include "sparsekit/vectorset.hpp"

namespace sparsekit {

enum class Algorithm { kAlmostLinear, kRandomizedBss };
enum class Mode { kExact, kFast };

std::string to_string(Algorithm a);
std::string to_string(Mode m);
Algorithm parse_algorithm(const std::string& name);
Mode parse_mode(const std::string& name);

/// Zero means "derive from the theoretical bound" (100x the bound).
struct Limits {
  std::int64_t max_iterations = 0;
  std::int64_t max_samples = 0;
};

inline constexpr double kEstimatorSlack = 0.1;

struct RunOptions {
  int q = 10;
  double eps = 0.05;
  Mode mode = Mode::kExact;
  std::uint64_t seed = 0;
  bool strict_resample = false;
  /// Checks 0 <= W <= (uI-A)/2 on every batch (exact mode only).
  bool check_half_barrier = true;
  Limits caps;
  /// Fast-mode estimator overrides; eps is the estimator accuracy and eta,
  /// when zero, comes from eta_schedule.
  EstimatorConfig estimator{.eps = kEstimatorSlack};
};

struct IterationRecord {
  std::int64_t j = 0;
  double N = 0.0;            // real batch size
  std::int64_t draws = 0;    // ceil(N), at least 1
  double sum_r = 0.0;
  double du = 0.0;
  double dl = 0.0;
  double u = 0.0;            // barriers after the step
  double ell = 0.0;
  double phi_before = std::numeric_limits<double>::quiet_NaN();
  double phi_after = std::numeric_limits<double>::quiet_NaN();
  int half_barrier = -1;     // 1 held, 0 failed, -1 not checked
  int resamples = 0;
  double alpha = std::numeric_limits<double>::quiet_NaN();  // fast mode
  double beta = std::numeric_limits<double>::quiet_NaN();
};

struct SparsifierResult {
  Algorithm algorithm = Algorithm::kAlmostLinear;
  Mode mode = Mode::kExact;
  std::vector<double> scalars;  // s_i before rescaling
  std::int64_t nonzero_count = 0;
  std::int64_t iterations = 0;
  std::int64_t total_samples = 0;
  double initial_u = 0.0;
  double initial_ell = 0.0;
  double final_u = 0.0;
  double final_ell = 0.0;
  double rescale = 1.0;
  bool aborted = false;
  std::string abort_reason;
  std::int64_t half_barrier_checked = 0;
  std::int64_t half_barrier_failures = 0;
  std::vector<IterationRecord> log;
  std::uint64_t seed = 0;
  int dim = 0;  // dimension the algorithm ran in
  int q = 0;
  double eps = 0.0;
  bool graph_mode = false;
  std::int64_t iteration_cap = 0;
  std::int64_t sample_cap = 0;
  int taylor_degree = 0;  // fast mode
  double eta = 0.0;       // fast mode

  /// rescale * s
  std::vector<double> rescaled_scalars() const;
};

/// 10 q n^{3/q} / eps^2 and 10 q n / eps^2.
double iteration_bound(int n, int q, double eps);
double sample_bound(int n, int q, double eps);

/// True iff 0 <= W <= (uI - A)/2 up to an eigenvalue tolerance of 1e-10.
bool check_half_barrier(const Eigen::MatrixXd& W, const Eigen::MatrixXd& A,
                        double u);

/// Algorithm 2 one iteration at a time. Exact mode keeps A in the reduced
/// coordinates of the vector set; fast mode keeps only the scalars and needs
/// graph provenance.
class AlmostLinearSampler {
 public:
  AlmostLinearSampler(const VectorSet& vs, const RunOptions& opt);
  ~AlmostLinearSampler();

  bool done() const;
  bool aborted() const { return result_.aborted; }

  /// Runs one iteration. Throws BarrierViolation carrying the iteration.
  const IterationRecord& step();

  /// Exact mode only.
  const BarrierState& state() const;
  const Eigen::MatrixXd& reduced_vectors() const { return V_; }
  const std::vector<double>& scalars() const { return result_.scalars; }
  double u() const { return u_; }
  double ell() const { return ell_; }
  std::int64_t iteration() const { return result_.iterations; }
  const RunOptions& options() const { return opt_; }
  const GraphContext* graph_context() const { return ctx_.get(); }
  const EstimatorConfig& estimator_config() const { return est_cfg_; }

  /// Runs to the ending condition (or cap) and returns the rescaled result.
  SparsifierResult run();
  /// Finalises with the current state.
  SparsifierResult finish();

 private:
  void step_exact(IterationRecord& rec);
  void step_fast(IterationRecord& rec);

  RunOptions opt_;
  Eigen::MatrixXd V_;
  int n_ = 0;
  BarrierState state_;
  double u_ = 0.0;
  double ell_ = 0.0;
  double gap_target_ = 0.0;
  Rng rng_;
  SparsifierResult result_;
  std::unique_ptr<GraphContext> ctx_;
  std::unique_ptr<FastEstimator> estimator_;
  EstimatorConfig est_cfg_;
};

SparsifierResult run_almost_linear(const VectorSet& vs, const RunOptions& opt);

/// Algorithm 1. Stops once the barrier gap has doubled.
SparsifierResult run_randomized_bss(const VectorSet& vs, double eps,
                                    std::uint64_t seed, const Limits& caps = {});

/// Eigenvalues of sum_i s_i v_i v_i^T in reduced coordinates.
Eigen::VectorXd weighted_spectrum(const VectorSet& vs,
                                  const std::vector<double>& scalars);

}  // namespace sparsekit
