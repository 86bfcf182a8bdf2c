#include "sparsekit/fastpath.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "sparsekit/error.hpp"
#include "sparsekit/graphs.hpp"
#include "sparsekit/kernels.hpp"

namespace sparsekit {

EstimatorConfig EstimatorConfig::resolved(int n) const {
  EstimatorConfig c = *this;
  const double logn = std::log(std::max(n, 2));
  if (c.taylor_degree == 0) {
    if (!(c.eta > 0.0 && c.eta < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "eta must lie in (0, 1) to derive the Taylor degree");
    }
    c.taylor_degree = sparsekit::taylor_degree(c.eps, c.eta, c.taylor_c);
  }
  if (c.jl_dim == 0) {
    c.jl_dim = static_cast<int>(std::ceil(24.0 * logn / (c.eps * c.eps)));
  }
  if (c.trace_k == 0) {
    c.trace_k = std::max(1, static_cast<int>(std::ceil(logn / c.eps)));
  }
  c.validate();
  return c;
}

void EstimatorConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidArgument, "estimator config: " + what);
  };
  if (!(eps > 0.0 && eps < 1.0)) fail("eps must lie in (0, 1)");
  if (!(eta > 0.0 && eta < 1.0)) fail("eta must lie in (0, 1)");
  if (!(taylor_c > 0.0)) fail("taylor_c must be positive");
  if (taylor_degree < 1) fail("Taylor degree must be >= 1");
  if (jl_dim < 1) fail("jl_dim must be >= 1");
  if (!(solver_tol > 0.0 && solver_tol <= 1e-2)) fail("solver_tol must lie in (0, 1e-2]");
  if (trace_k < 1) fail("trace_k must be >= 1");
}

std::vector<double> taylor_coeffs(int T) {
  if (T < 1) throw Error(ErrorCode::kInvalidArgument, "Taylor degree must be >= 1");
  std::vector<double> c(static_cast<std::size_t>(T) + 1);
  c[0] = 1.0;
  for (int k = 1; k <= T; ++k) c[k] = c[k - 1] * (k - 0.5) / k;
  return c;
}

double taylor_tail_bound(double eta, int T) {
  return std::pow(1.0 - eta, T + 1) / eta;
}

int taylor_degree(double eps, double eta, double taylor_c) {
  const double t = taylor_c * std::log(1.0 / (eps * eta)) / eta;
  if (!std::isfinite(t) || t > 1e7) {
    throw Error(ErrorCode::kInvalidArgument, "Taylor degree is not finite");
  }
  return std::max(1, static_cast<int>(std::ceil(t)));
}

double eta_schedule(int n, double eps, int q, double c_eta) {
  return std::max(kEtaFloor, c_eta * std::pow(eps / n, 2.0 / q));
}

double eta_schedule(const BarrierState& s) {
  return eta_schedule(s.dim(), s.eps, s.q);
}

double poly_eval(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Eigen::MatrixXd poly_eval_ps(const std::vector<double>& c,
                             const Eigen::MatrixXd& N, double scale) {
  const Eigen::Index n = N.rows();
  const Eigen::Index nn = n * n;
  const int terms = static_cast<int>(c.size());
  if (terms == 0) return Eigen::MatrixXd::Zero(n, n);
  const int s = std::max(1, static_cast<int>(std::ceil(std::sqrt(terms))));
  const int r = (terms + s - 1) / s;

  // Powers M^0..M^{s-1} are stored as flattened columns so that all r block
  // polynomials B_b = sum_j c_{bs+j} M^j come out of one product.
  // Reused across calls; these are large enough to hit mmap on every allocation.
  thread_local Eigen::MatrixXd powers, blocks;
  powers.resize(nn, s);
  auto power = [&](int j) { return Eigen::Map<Eigen::MatrixXd>(powers.col(j).data(), n, n); };
  power(0).setIdentity();
  if (s > 1) power(1) = scale * N;
  {
    const Eigen::MatrixXd M = scale * N;
    Eigen::MatrixXd cur = M, next(n, n);
    for (int j = 2; j < s; ++j) {
      next.noalias() = cur * M;
      cur.swap(next);
      power(j) = cur;
    }
  }
  Eigen::MatrixXd coef = Eigen::MatrixXd::Zero(s, r);
  for (int k = 0; k < terms; ++k) coef(k % s, k / s) = c[k];
  blocks.resize(nn, r);
  blocks.noalias() = powers * coef;
  auto block = [&](int b) {
    return Eigen::Map<const Eigen::MatrixXd>(blocks.col(b).data(), n, n);
  };

  Eigen::MatrixXd R = block(r - 1);
  if (r == 1) return R;
  Eigen::MatrixXd Ms(n, n);
  if (s == 1) {
    Ms = scale * N;
  } else {
    Ms.noalias() = power(s - 1) * power(1);
  }
  Eigen::MatrixXd tmp(n, n);
  for (int b = r - 2; b >= 0; --b) {
    tmp.noalias() = R * Ms;
    R.swap(tmp);
    R += block(b);
  }
  return R;
}

Eigen::MatrixXd poly_eval_horner(const std::vector<double>& c,
                                 const Eigen::MatrixXd& N, double scale) {
  const Eigen::Index n = N.rows();
  const Eigen::MatrixXd M = scale * N;
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd tmp(n, n);
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    tmp.noalias() = R * M;
    R = tmp;
    R.diagonal().array() += *it;
  }
  return R;
}

namespace {

void normalise(Eigen::MatrixXd& X, double& log_scale) {
  const double a = X.cwiseAbs().maxCoeff();
  if (a > 0.0 && std::isfinite(a)) {
    X /= a;
    log_scale += std::log(a);
  }
}

}  // namespace

ScaledPower scaled_power(const Eigen::MatrixXd& M, int k) {
  if (k < 0) throw Error(ErrorCode::kInvalidArgument, "negative matrix power");
  ScaledPower out{Eigen::MatrixXd::Identity(M.rows(), M.cols()), 0.0};
  Eigen::MatrixXd base = M;
  double base_log = 0.0;
  normalise(base, base_log);
  Eigen::MatrixXd tmp(M.rows(), M.cols());
  bool first = true;
  while (k > 0) {
    if (k & 1) {
      if (first) {
        out.matrix = base;
        first = false;
      } else {
        tmp.noalias() = out.matrix * base;
        out.matrix = tmp;
      }
      out.log_scale += base_log;
      normalise(out.matrix, out.log_scale);
    }
    k >>= 1;
    if (k > 0) {
      tmp.noalias() = base * base;
      base = tmp;
      base_log *= 2.0;
      normalise(base, base_log);
    }
  }
  return out;
}

GraphContext::GraphContext(WeightedGraph g, double solver_tol)
    : g_(std::move(g)), solver_tol_(solver_tol) {
  require_connected(g_);
  w_ = edge_weights(g_);
  L_ = laplacian_sparse(g_);
  B0_ = sparsekit::signed_incidence(g_);
  solver_ = std::make_unique<LaplacianSolver>(L_, solver_tol_);
}

const Eigen::MatrixXd& GraphContext::pinv() const {
  if (pinv_.size() == 0) pinv_ = solver_->pseudo_inverse();
  return pinv_;
}

Eigen::SparseMatrix<double> GraphContext::weighted_laplacian(
    const Eigen::VectorXd& c) const {
  return laplacian_sparse(g_, c);
}

Eigen::SparseMatrix<double> GraphContext::weighted_incidence(
    const Eigen::VectorXd& c) const {
  Eigen::SparseMatrix<double> B = c.cwiseSqrt().asDiagonal() * B0_;
  B.makeCompressed();
  return B;
}

namespace {

Eigen::MatrixXd project_columns(const Eigen::MatrixXd& Y) {
  Eigen::MatrixXd out = Y;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    out.col(c).array() -= out.col(c).mean();
  }
  return out;
}

void check_state(const GraphContext& ctx, const GraphState& st) {
  if (st.s.size() != ctx.m()) {
    throw Error(ErrorCode::kStructural, "scalar count does not match the edge count");
  }
  if (!(st.u > 0.0) || !(st.ell < st.u)) {
    throw Error(ErrorCode::kInvalidArgument, "barriers must satisfy ell < u, u > 0");
  }
}

// Horner on a block: Z <- c_k Y + M(Z), from the top coefficient down.
template <typename Op>
Eigen::MatrixXd horner_apply(const std::vector<double>& c,
                             const Eigen::MatrixXd& Y, Op&& op) {
  Eigen::MatrixXd Z = c.back() * Y;
  for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k) {
    Z = c[k] * Y + op(Z);
  }
  return Z;
}

}  // namespace

Eigen::MatrixXd apply_S_u(const GraphContext& ctx, const GraphState& st,
                          const EstimatorConfig& cfg,
                          const Eigen::MatrixXd& Y) {
  check_state(ctx, st);
  const EstimatorConfig c = cfg.resolved(ctx.n());
  const auto coeffs = taylor_coeffs(c.taylor_degree);
  const LaplacianSolver& L = ctx.solver();
  const Eigen::SparseMatrix<double> Lt =
      ctx.weighted_laplacian(st.s.cwiseProduct(ctx.weights()));
  const double inv_u = 1.0 / st.u;
  const Eigen::MatrixXd Z =
      horner_apply(coeffs, project_columns(Y), [&](const Eigen::MatrixXd& X) {
        return Eigen::MatrixXd(inv_u * (Lt * L.solve_block(X)));
      });
  const Eigen::SparseMatrix<double> B = ctx.weighted_incidence(ctx.weights());
  return (B * L.solve_block(Z)) / std::sqrt(st.u);
}

Eigen::MatrixXd apply_S_ell(const GraphContext& ctx, const GraphState& st,
                            const EstimatorConfig& cfg,
                            const Eigen::MatrixXd& Y) {
  check_state(ctx, st);
  const Eigen::MatrixXd Yp = project_columns(Y);
  if (st.ell <= 0.0) {
    const Eigen::VectorXd cp =
        (st.s.array() - st.ell).matrix().cwiseProduct(ctx.weights());
    const LaplacianSolver S(ctx.weighted_laplacian(cp), cfg.solver_tol);
    return ctx.weighted_incidence(cp) * S.solve_block(Yp);
  }
  const EstimatorConfig c = cfg.resolved(ctx.n());
  const auto coeffs = taylor_coeffs(c.taylor_degree);
  const Eigen::VectorXd ct = st.s.cwiseProduct(ctx.weights());
  const LaplacianSolver S(ctx.weighted_laplacian(ct), c.solver_tol);
  const Eigen::SparseMatrix<double>& L = ctx.laplacian();
  const double ell = st.ell;
  const Eigen::MatrixXd Z =
      horner_apply(coeffs, Yp, [&](const Eigen::MatrixXd& X) {
        return Eigen::MatrixXd(ell * (L * S.solve_block(X)));
      });
  return ctx.weighted_incidence(ct) * S.solve_block(Z);
}

EdgeSketch::EdgeSketch(int m, int jl_dim, SketchMethod method,
                       std::uint64_t seed) {
  if (m < 1 || jl_dim < 1) {
    throw Error(ErrorCode::kInvalidArgument, "sketch needs m >= 1 and jl_dim >= 1");
  }
  if (method == SketchMethod::kAuto) {
    method = jl_dim >= m ? SketchMethod::kWishart : SketchMethod::kExplicit;
  }
  if (method == SketchMethod::kWishart && jl_dim < m) {
    throw Error(ErrorCode::kInvalidArgument,
                "direct Gram sampling needs jl_dim >= m");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  explicit_ = method == SketchMethod::kExplicit;
  if (explicit_) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(jl_dim));
    data_.resize(jl_dim, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      for (Eigen::Index i = 0; i < jl_dim; ++i) data_(i, j) = scale * normal(rng);
    }
    return;
  }
  // Bartlett: Q^T Q * jl_dim ~ Wishart(I_m, jl_dim) = T T^T with T lower
  // triangular, T_ii^2 ~ chi^2(jl_dim - i), T_ij ~ N(0, 1) below the diagonal.
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    std::chi_squared_distribution<double> chi(static_cast<double>(jl_dim - i));
    T(i, i) = std::sqrt(chi(rng));
    for (Eigen::Index j = 0; j < i; ++j) T(i, j) = normal(rng);
  }
  data_.noalias() = T.triangularView<Eigen::Lower>() * T.transpose();
  data_ /= static_cast<double>(jl_dim);
  data_ = 0.5 * (data_ + data_.transpose());
}

Eigen::MatrixXd EdgeSketch::gram(const Eigen::SparseMatrix<double>& B0,
                                 const Eigen::VectorXd& c) const {
  const Eigen::VectorXd root = c.cwiseSqrt();
  Eigen::MatrixXd G;
  if (explicit_) {
    const Eigen::MatrixXd QD = data_ * root.asDiagonal();
    const Eigen::MatrixXd Y = QD * B0;
    G.noalias() = Y.transpose() * Y;
  } else {
    const Eigen::MatrixXd DKD =
        root.asDiagonal() * data_ * root.asDiagonal();
    const Eigen::MatrixXd T = DKD * B0;
    G = B0.transpose() * T;
  }
  return 0.5 * (G + G.transpose());
}

Eigen::MatrixXd EdgeSketch::edge_gram() const {
  if (explicit_) return data_.transpose() * data_;
  return data_;
}

double probe_trace(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Lpinv,
                   const Eigen::MatrixXd& G) {
  const Eigen::MatrixXd T1 = Lpinv * X;
  const Eigen::MatrixXd T2 = X.transpose() * T1;
  return T2.cwiseProduct(G).sum();
}

FastEstimator::FastEstimator(const GraphContext& ctx, const EstimatorConfig& cfg)
    : ctx_(ctx), cfg_(cfg) {
  cfg_.validate();
  coeffs_ = taylor_coeffs(cfg_.taylor_degree);
}

Estimates FastEstimator::estimate(const GraphState& st,
                                  std::uint64_t seed) const {
  const EdgeSketch sketch(ctx_.m(), cfg_.jl_dim, cfg_.sketch, seed);
  return estimate(st, sketch);
}

Estimates FastEstimator::estimate(const GraphState& st,
                                  const EdgeSketch& sketch) const {
  check_state(ctx_, st);
  const Eigen::MatrixXd& Lp = ctx_.pinv();
  const Eigen::VectorXd& w = ctx_.weights();
  const auto& edges = ctx_.graph().edges();
  const auto& B0 = ctx_.signed_incidence();
  const auto& L = ctx_.laplacian();
  const int k = cfg_.trace_k;

  Estimates out;
  out.degree = cfg_.taylor_degree;
  out.positive_ell = st.ell > 0.0;

  const Eigen::VectorXd ct = st.s.cwiseProduct(w);
  const Eigen::SparseMatrix<double> Lt = ctx_.weighted_laplacian(ct);
  const Eigen::MatrixXd G0 = sketch.gram(B0, w);

  // Upper side: S_u^2 ~ (uI-A)^{-1} through P = p_T(Lt L^+ / u).
  const Eigen::MatrixXd N = Lt * Lp;
  const Eigen::MatrixXd P = poly_eval_ps(coeffs_, N, 1.0 / st.u);
  {
    const Eigen::MatrixXd X = Lp * P;
    const Eigen::MatrixXd H = X.transpose() * G0 * X;
    out.r = kernels::edge_quadratic_forms(H, edges, w / st.u);
    const ScaledPower Pk = scaled_power(P, k);
    const double log_tr =
        std::log(probe_trace(Pk.matrix, Lp, G0)) + 2.0 * Pk.log_scale;
    out.alpha = st.u * std::exp(-log_tr / k);
  }

  // Lower side.
  ScaledPower Zk;
  if (st.ell <= 0.0) {
    const Eigen::VectorXd cp = (st.s.array() - st.ell).matrix().cwiseProduct(w);
    const LaplacianSolver S(ctx_.weighted_laplacian(cp), cfg_.solver_tol);
    const Eigen::MatrixXd Xp = S.pseudo_inverse(&warm_shifted_);
    warm_shifted_ = Xp;
    const Eigen::MatrixXd Gp = sketch.gram(B0, cp);
    out.t = kernels::edge_quadratic_forms(Xp.transpose() * Gp * Xp, edges, w);
    Zk = scaled_power(Eigen::MatrixXd(L * Xp), k);
  } else {
    const LaplacianSolver S(Lt, cfg_.solver_tol);
    const Eigen::MatrixXd Ltp = S.pseudo_inverse(&warm_weighted_);
    warm_weighted_ = Ltp;
    const Eigen::MatrixXd Nb = L * Ltp;
    const Eigen::MatrixXd Pl = poly_eval_ps(coeffs_, Nb, st.ell);
    const Eigen::MatrixXd Xt = Ltp * Pl;
    const Eigen::MatrixXd Gt = sketch.gram(B0, ct);
    out.t = kernels::edge_quadratic_forms(Xt.transpose() * Gt * Xt, edges, w);
    Zk = scaled_power(Nb * Pl * Pl, k);
  }
  const double log_tr =
      std::log(probe_trace(Zk.matrix, Lp, G0)) + 2.0 * Zk.log_scale;
  out.beta = std::exp(-log_tr / (2.0 * k));
  return out;
}

ResistanceEstimates estimate_resistances(const GraphContext& ctx,
                                         const GraphState& st,
                                         const EstimatorConfig& cfg,
                                         std::uint64_t seed) {
  const FastEstimator est(ctx, cfg.resolved(ctx.n()));
  Estimates e = est.estimate(st, seed);
  return {std::move(e.r), std::move(e.t)};
}

LambdaMinEstimates estimate_lambda_mins(const GraphContext& ctx,
                                        const GraphState& st,
                                        const EstimatorConfig& cfg,
                                        std::uint64_t seed) {
  const FastEstimator est(ctx, cfg.resolved(ctx.n()));
  const Estimates e = est.estimate(st, seed);
  return {e.alpha, e.beta};
}

}  // namespace sparsekit
