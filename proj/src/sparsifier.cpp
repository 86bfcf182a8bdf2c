#include "sparsekit/sparsifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "sparsekit/error.hpp"
#include "sparsekit/kernels.hpp"
#include "sparsekit/log.hpp"

namespace sparsekit {

namespace {

constexpr int kMaxResamples = 1000;
constexpr double kHalfBarrierTol = 1e-10;

struct AggregatedBatch {
  std::vector<Eigen::Index> columns;
  std::vector<int> counts;
};

AggregatedBatch aggregate(const std::vector<int>& draws) {
  std::map<int, int> counts;
  for (int i : draws) ++counts[i];
  AggregatedBatch out;
  for (const auto& [i, c] : counts) {
    out.columns.push_back(i);
    out.counts.push_back(c);
  }
  return out;
}

std::int64_t cap_from(std::int64_t requested, double bound) {
  if (requested > 0) return requested;
  return static_cast<std::int64_t>(std::ceil(100.0 * bound));
}

}  // namespace

std::string to_string(Algorithm a) {
  return a == Algorithm::kAlmostLinear ? "almost-linear" : "rbss";
}

std::string to_string(Mode m) { return m == Mode::kExact ? "exact" : "fast"; }

Algorithm parse_algorithm(const std::string& name) {
  if (name == "almost-linear") return Algorithm::kAlmostLinear;
  if (name == "rbss") return Algorithm::kRandomizedBss;
  throw Error(ErrorCode::kInvalidArgument, "unknown algorithm '" + name + "'");
}

Mode parse_mode(const std::string& name) {
  if (name == "exact") return Mode::kExact;
  if (name == "fast") return Mode::kFast;
  throw Error(ErrorCode::kInvalidArgument, "unknown mode '" + name + "'");
}

std::vector<double> SparsifierResult::rescaled_scalars() const {
  std::vector<double> out = scalars;
  for (double& x : out) x *= rescale;
  return out;
}

double iteration_bound(int n, int q, double eps) {
  return 10.0 * q * std::pow(static_cast<double>(n), 3.0 / q) / (eps * eps);
}

double sample_bound(int n, int q, double eps) {
  return 10.0 * q * n / (eps * eps);
}

bool check_half_barrier(const Eigen::MatrixXd& W, const Eigen::MatrixXd& A,
                        double u) {
  const Eigen::Index n = W.rows();
  const Eigen::MatrixXd shift =
      kHalfBarrierTol * Eigen::MatrixXd::Identity(n, n);
  Eigen::LLT<Eigen::MatrixXd> lower(W + shift);
  if (lower.info() != Eigen::Success) return false;
  Eigen::MatrixXd M = -0.5 * A - W + shift;
  M.diagonal().array() += 0.5 * u;
  Eigen::LLT<Eigen::MatrixXd> upper(M);
  return upper.info() == Eigen::Success;
}

AlmostLinearSampler::AlmostLinearSampler(const VectorSet& vs,
                                         const RunOptions& opt)
    : opt_(opt), rng_(opt.seed) {
  check_parameters(opt.q, opt.eps);
  const ValidationReport rep = validate_decomposition(vs);
  if (!rep.pass) {
    throw Error(ErrorCode::kStructural,
                "vector set is not an isotropic decomposition (deviation " +
                    std::to_string(rep.deviation) + ")");
  }
  V_ = vs.reduced();
  n_ = static_cast<int>(V_.rows());
  u_ = initial_barrier(n_, opt.q);
  ell_ = -u_;
  gap_target_ = 4.0 * u_;

  result_.algorithm = Algorithm::kAlmostLinear;
  result_.mode = opt.mode;
  result_.scalars.assign(static_cast<std::size_t>(V_.cols()), 0.0);
  result_.seed = opt.seed;
  result_.dim = n_;
  result_.q = opt.q;
  result_.eps = opt.eps;
  result_.graph_mode = vs.provenance().has_value();
  result_.initial_u = u_;
  result_.initial_ell = ell_;
  result_.iteration_cap =
      cap_from(opt.caps.max_iterations, iteration_bound(n_, opt.q, opt.eps));
  result_.sample_cap =
      cap_from(opt.caps.max_samples, sample_bound(n_, opt.q, opt.eps));

  if (opt.mode == Mode::kExact) {
    state_ = initial_state(n_, opt.q, opt.eps);
    return;
  }
  if (!vs.provenance()) {
    throw Error(ErrorCode::kMissingProvenance,
                "fast mode needs a graph-derived vector set");
  }
  est_cfg_ = opt.estimator;
  if (est_cfg_.eta == 0.0) est_cfg_.eta = eta_schedule(n_, opt.eps, opt.q);
  ctx_ = std::make_unique<GraphContext>(*vs.provenance(), est_cfg_.solver_tol);
  est_cfg_ = est_cfg_.resolved(ctx_->n());
  estimator_ = std::make_unique<FastEstimator>(*ctx_, est_cfg_);
  result_.taylor_degree = est_cfg_.taylor_degree;
  result_.eta = est_cfg_.eta;
}

AlmostLinearSampler::~AlmostLinearSampler() = default;

bool AlmostLinearSampler::done() const {
  return result_.aborted || u_ - ell_ >= gap_target_;
}

const BarrierState& AlmostLinearSampler::state() const {
  if (opt_.mode != Mode::kExact) {
    throw Error(ErrorCode::kInvalidArgument, "fast mode does not track A");
  }
  return state_;
}

const IterationRecord& AlmostLinearSampler::step() {
  if (done()) {
    throw Error(ErrorCode::kInvalidArgument, "the run has already finished");
  }
  IterationRecord rec;
  rec.j = result_.iterations;
  try {
    if (opt_.mode == Mode::kExact) {
      step_exact(rec);
    } else {
      step_fast(rec);
    }
  } catch (const BarrierViolation& e) {
    throw e.at_iteration(rec.j);
  }
  rec.u = u_;
  rec.ell = ell_;
  ++result_.iterations;
  result_.total_samples += rec.draws;
  result_.log.push_back(rec);
  if (!done()) {
    if (result_.iterations >= result_.iteration_cap) {
      result_.aborted = true;
      result_.abort_reason = "iteration cap reached";
    } else if (result_.total_samples > result_.sample_cap) {
      result_.aborted = true;
      result_.abort_reason = "sample cap exceeded";
    }
    if (result_.aborted) {
      logger()->warn("run aborted after {} iterations: {}", result_.iterations,
                     result_.abort_reason);
    }
  }
  return result_.log.back();
}

void AlmostLinearSampler::step_exact(IterationRecord& rec) {
  const int q = opt_.q;
  const double eps = opt_.eps;
  const SpectralSnapshot snap(state_.A, u_, ell_);
  rec.phi_before = snap.potential(q);
  if (!result_.log.empty()) result_.log.back().phi_after = rec.phi_before;

  const Eigen::VectorXd R = snap.resistances(V_);
  rec.sum_r = R.sum();
  rec.N = batch_size(n_, q, rec.sum_r, snap.lambda_extremes());
  rec.draws = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(rec.N)));
  const std::vector<double> weights(R.data(), R.data() + R.size());

  AggregatedBatch batch;
  Eigen::MatrixXd W;
  std::vector<double> c;
  while (true) {
    batch = aggregate(sample_batch(weights, rec.draws, rng_));
    c.resize(batch.columns.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
      c[k] = batch.counts[k] * eps / (q * R[batch.columns[k]]);
    }
    W = kernels::weighted_outer_sum(V_, batch.columns, c);
    if (!opt_.check_half_barrier && !opt_.strict_resample) break;
    const bool ok = check_half_barrier(W, state_.A, u_);
    ++result_.half_barrier_checked;
    rec.half_barrier = ok ? 1 : 0;
    if (ok) break;
    ++result_.half_barrier_failures;
    if (!opt_.strict_resample) break;
    if (++rec.resamples > kMaxResamples) {
      throw Error(ErrorCode::kBarrierViolation,
                  "half-barrier event failed on every redraw at iteration " +
                      std::to_string(rec.j));
    }
  }

  state_.A += W;
  for (std::size_t k = 0; k < c.size(); ++k) {
    result_.scalars[static_cast<std::size_t>(batch.columns[k])] += c[k];
  }
  const BarrierIncrements inc = barrier_increments(q, eps, rec.N, rec.sum_r);
  rec.du = inc.du;
  rec.dl = inc.dl;
  u_ += inc.du;
  ell_ += inc.dl;
  state_.u = u_;
  state_.ell = ell_;
  ++state_.j;
}

void AlmostLinearSampler::step_fast(IterationRecord& rec) {
  const int q = opt_.q;
  const double eps = opt_.eps;
  const double slack = est_cfg_.eps;
  GraphState st;
  st.s = Eigen::Map<const Eigen::VectorXd>(result_.scalars.data(),
                                           static_cast<Eigen::Index>(result_.scalars.size()));
  st.u = u_;
  st.ell = ell_;
  const Estimates e =
      estimator_->estimate(st, derive_seed(opt_.seed, static_cast<std::uint64_t>(rec.j)));
  const Eigen::VectorXd R = (1.0 + slack) * (e.r + e.t);
  if (!R.allFinite() || R.minCoeff() <= 0.0 || !(e.alpha > 0.0) ||
      !(e.beta > 0.0) || !std::isfinite(e.alpha) || !std::isfinite(e.beta)) {
    throw Error(ErrorCode::kSolverFailure,
                "estimator produced non-positive or non-finite values at iteration " +
                    std::to_string(rec.j));
  }
  rec.alpha = e.alpha;
  rec.beta = e.beta;
  rec.sum_r = R.sum();
  rec.N = std::pow(static_cast<double>(n_), -2.0 / q) * rec.sum_r * (1.0 - slack) *
          std::min(e.alpha, e.beta) * (1.0 - slack) / (1.0 + slack);
  rec.draws = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(rec.N)));
  const std::vector<double> weights(R.data(), R.data() + R.size());
  const AggregatedBatch batch = aggregate(sample_batch(weights, rec.draws, rng_));
  for (std::size_t k = 0; k < batch.columns.size(); ++k) {
    const Eigen::Index i = batch.columns[k];
    result_.scalars[static_cast<std::size_t>(i)] += batch.counts[k] * eps / (q * R[i]);
  }
  const BarrierIncrements inc = barrier_increments(q, eps, rec.N, rec.sum_r);
  rec.du = inc.du;
  rec.dl = inc.dl;
  u_ += inc.du;
  ell_ += inc.dl;
}

SparsifierResult AlmostLinearSampler::finish() {
  result_.final_u = u_;
  result_.final_ell = ell_;
  result_.rescale = 2.0 / (u_ + ell_);
  result_.nonzero_count = std::count_if(result_.scalars.begin(), result_.scalars.end(),
                                        [](double x) { return x != 0.0; });
  if (opt_.mode == Mode::kExact) {
    const SpectralSnapshot snap(state_.A, u_, ell_);
    if (!result_.log.empty()) result_.log.back().phi_after = snap.potential(opt_.q);
  }
  return result_;
}

SparsifierResult AlmostLinearSampler::run() {
  while (!done()) step();
  return finish();
}

SparsifierResult run_almost_linear(const VectorSet& vs, const RunOptions& opt) {
  AlmostLinearSampler sampler(vs, opt);
  return sampler.run();
}

SparsifierResult run_randomized_bss(const VectorSet& vs, double eps,
                                    std::uint64_t seed, const Limits& caps) {
  if (!(eps > 0.0 && eps <= kMaxEps)) {
    throw Error(ErrorCode::kInvalidArgument,
                "eps must lie in (0, 0.1], got " + std::to_string(eps));
  }
  const ValidationReport rep = validate_decomposition(vs);
  if (!rep.pass) {
    throw Error(ErrorCode::kStructural,
                "vector set is not an isotropic decomposition");
  }
  const Eigen::MatrixXd V = vs.reduced();
  const int n = static_cast<int>(V.rows());
  Rng rng(seed);

  SparsifierResult res;
  res.algorithm = Algorithm::kRandomizedBss;
  res.mode = Mode::kExact;
  res.scalars.assign(static_cast<std::size_t>(V.cols()), 0.0);
  res.seed = seed;
  res.dim = n;
  res.q = 1;
  res.eps = eps;
  res.graph_mode = vs.provenance().has_value();
  double u = 8.0 * n / eps;
  double ell = -u;
  res.initial_u = u;
  res.initial_ell = ell;
  const double target = 2.0 * (u - ell);
  const double bound = 40.0 * n / (eps * eps);
  res.sample_cap = cap_from(caps.max_samples, bound);
  res.iteration_cap = cap_from(caps.max_iterations, bound);

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  while (u - ell < target) {
    IterationRecord rec;
    rec.j = res.iterations;
    std::optional<SpectralSnapshot> snap;
    try {
      snap.emplace(A, u, ell);
    } catch (const BarrierViolation& e) {
      throw e.at_iteration(rec.j);
    }
    const Eigen::VectorXd& lam = snap->eigenvalues();
    double t = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      t += 1.0 / (u - lam[i]) + 1.0 / (lam[i] - ell);
    }
    rec.phi_before = t;
    if (!res.log.empty()) res.log.back().phi_after = t;
    const Eigen::VectorXd R = snap->resistances(V);
    const std::vector<double> weights(R.data(), R.data() + R.size());
    const int i = sample_batch(weights, 1, rng).front();
    const double c = eps / R[i];
    A.noalias() += c * V.col(i) * V.col(i).transpose();
    res.scalars[static_cast<std::size_t>(i)] += c;

    rec.N = 1.0;
    rec.draws = 1;
    rec.sum_r = t;
    rec.du = eps / (t * (1.0 - eps));
    rec.dl = eps / (t * (1.0 + eps));
    u += rec.du;
    ell += rec.dl;
    rec.u = u;
    rec.ell = ell;
    ++res.iterations;
    ++res.total_samples;
    res.log.push_back(rec);
    if (u - ell < target &&
        (res.iterations >= res.iteration_cap || res.total_samples >= res.sample_cap)) {
      res.aborted = true;
      res.abort_reason = "sample cap reached";
      break;
    }
  }
  res.final_u = u;
  res.final_ell = ell;
  res.rescale = 2.0 / (u + ell);
  res.nonzero_count = std::count_if(res.scalars.begin(), res.scalars.end(),
                                    [](double x) { return x != 0.0; });
  const SpectralSnapshot last(A, u, ell);
  if (!res.log.empty()) res.log.back().phi_after = last.potential(1);
  return res;
}

Eigen::VectorXd weighted_spectrum(const VectorSet& vs,
                                  const std::vector<double>& scalars) {
  const Eigen::MatrixXd V = vs.reduced();
  if (static_cast<Eigen::Index>(scalars.size()) != V.cols()) {
    throw Error(ErrorCode::kStructural, "scalar count does not match the vector count");
  }
  const Eigen::Map<const Eigen::VectorXd> s(scalars.data(), V.cols());
  Eigen::MatrixXd M = V * s.asDiagonal() * V.transpose();
  M = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace sparsekit
