#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "sparsekit/graph.hpp"
#include "sparsekit/potential.hpp"
#include "sparsekit/solver.hpp"

// Estimators for Algorithm 2 that never form A or v_i. A graph state is the
// base graph G (Laplacian L) together with the accumulated scalars s, whose
// Laplacian is Lt = sum_e s_e w_e b_e b_e^T, so A = L^{+/2} Lt L^{+/2}.
// Everything is carried in vertex coordinates through the identity
// f(A) L^{+/2} = L^{+/2} f(Lt L^+).

namespace sparsekit {

enum class SketchMethod {
  kAuto,      // Gram sampled directly when jl_dim >= m, explicit otherwise
  kExplicit,  // Q with i.i.d. N(0, 1/jl_dim) entries
  kWishart,   // Q^T Q drawn through the Bartlett factorization
};

struct EstimatorConfig {
  double eps = 0.1;          // accuracy target
  double eta = 0.0;          // separation; must be set (see eta_schedule)
  double taylor_c = 4.0;
  int taylor_degree = 0;     // 0: ceil(taylor_c * ln(1/(eps*eta)) / eta)
  int jl_dim = 0;            // 0: ceil(24 ln n / eps^2)
  double solver_tol = 1e-10;
  int trace_k = 0;           // 0: ceil(ln n / eps)
  SketchMethod sketch = SketchMethod::kAuto;

  /// Copy with every derived field filled in for an n-vertex graph.
  EstimatorConfig resolved(int n) const;
  /// Throws Error(kInvalidArgument) on out-of-range fields.
  void validate() const;
};

/// Coefficients of the degree-T truncation of (1-x)^{-1/2}.
std::vector<double> taylor_coeffs(int T);

/// (1-eta)^{T+1} / eta
double taylor_tail_bound(double eta, int T);

int taylor_degree(double eps, double eta, double taylor_c);

inline constexpr double kEtaConstant = 0.1;
inline constexpr double kEtaFloor = 1e-4;

/// max(kEtaFloor, c_eta * (eps/n)^{2/q})
double eta_schedule(int n, double eps, int q, double c_eta = kEtaConstant);
double eta_schedule(const BarrierState& s);

double poly_eval(const std::vector<double>& c, double x);

/// p(scale * N) by Paterson-Stockmeyer.
Eigen::MatrixXd poly_eval_ps(const std::vector<double>& c,
                             const Eigen::MatrixXd& N, double scale);
/// p(scale * N) by Horner; reference for the routine above.
Eigen::MatrixXd poly_eval_horner(const std::vector<double>& c,
                                 const Eigen::MatrixXd& N, double scale);

/// M^k = exp(log_scale) * matrix, normalised after every product.
struct ScaledPower {
  Eigen::MatrixXd matrix;
  double log_scale = 0.0;
};
ScaledPower scaled_power(const Eigen::MatrixXd& M, int k);

/// Quantities that depend only on the base graph.
class GraphContext {
 public:
  GraphContext(WeightedGraph g, double solver_tol);

  const WeightedGraph& graph() const { return g_; }
  int n() const { return g_.n_vertices(); }
  int m() const { return static_cast<int>(g_.edge_count()); }
  const Eigen::VectorXd& weights() const { return w_; }
  const Eigen::SparseMatrix<double>& laplacian() const { return L_; }
  const Eigen::SparseMatrix<double>& signed_incidence() const { return B0_; }
  const LaplacianSolver& solver() const { return *solver_; }
  double solver_tol() const { return solver_tol_; }

  /// Dense L^+, built by block solves on first use.
  const Eigen::MatrixXd& pinv() const;

  /// sum_e c_e b_e b_e^T
  Eigen::SparseMatrix<double> weighted_laplacian(const Eigen::VectorXd& c) const;
  /// Rows sqrt(c_e) b_e^T.
  Eigen::SparseMatrix<double> weighted_incidence(const Eigen::VectorXd& c) const;

 private:
  WeightedGraph g_;
  Eigen::VectorXd w_;
  Eigen::SparseMatrix<double> L_;
  Eigen::SparseMatrix<double> B0_;
  double solver_tol_;
  std::unique_ptr<LaplacianSolver> solver_;
  mutable Eigen::MatrixXd pinv_;
};

struct GraphState {
  Eigen::VectorXd s;  // per-edge scalars, pre-rescale
  double u = 0.0;
  double ell = 0.0;
};

/// Inputs y stand for x = L^{+/2} y (y orthogonal to the ones vector).
/// Each column of the result is an edge-space vector F z whose norms and
/// inner products equal those of S x:
///   apply_S_u:   F z = B L^+ p_T(Lt L^+ / u) y / sqrt(u)
///   apply_S_ell: ell <= 0: B' L'^+ y with L' = Lt - ell L
///                ell >  0: Bt Lt^+ p_T(ell L Lt^+) y
/// Evaluation is operator-only: one solve and one sparse product per degree.
Eigen::MatrixXd apply_S_u(const GraphContext& ctx, const GraphState& st,
                          const EstimatorConfig& cfg, const Eigen::MatrixXd& Y);
Eigen::MatrixXd apply_S_ell(const GraphContext& ctx, const GraphState& st,
                            const EstimatorConfig& cfg, const Eigen::MatrixXd& Y);

/// Gram matrix of a JL sketch of the edge space, in a form that yields
/// (Q D_sqrt(c) B0)^T (Q D_sqrt(c) B0) for any edge weights c.
class EdgeSketch {
 public:
  EdgeSketch(int m, int jl_dim, SketchMethod method, std::uint64_t seed);

  Eigen::MatrixXd gram(const Eigen::SparseMatrix<double>& B0,
                       const Eigen::VectorXd& c) const;

  /// Q^T Q (m x m).
  Eigen::MatrixXd edge_gram() const;

  bool explicit_form() const { return explicit_; }

 private:
  bool explicit_;
  Eigen::MatrixXd data_;  // Q (jl_dim x m) or Q^T Q (m x m)
};

struct Estimates {
  Eigen::VectorXd r;   // ~ v_i^T (uI-A)^{-1} v_i
  Eigen::VectorXd t;   // ~ v_i^T (A-ell I)^{-1} v_i
  double alpha = 0.0;  // ~ lambda_min(uI-A)
  double beta = 0.0;   // ~ lambda_min(A-ell I)
  int degree = 0;
  bool positive_ell = false;
};

/// Dense-operator realisation of the estimators: the Laplacian-coordinate
/// matrices are n x n and polynomials are evaluated by Paterson-Stockmeyer.
class FastEstimator {
 public:
  /// cfg must be resolved for ctx.n().
  FastEstimator(const GraphContext& ctx, const EstimatorConfig& cfg);

  Estimates estimate(const GraphState& st, std::uint64_t seed) const;
  Estimates estimate(const GraphState& st, const EdgeSketch& sketch) const;

  const EstimatorConfig& config() const { return cfg_; }

 private:
  const GraphContext& ctx_;
  EstimatorConfig cfg_;
  std::vector<double> coeffs_;
  // Last dense pseudo-inverse per lower-side branch; the next solve starts
  // from it since the state moves little between iterations.
  mutable Eigen::MatrixXd warm_shifted_;
  mutable Eigen::MatrixXd warm_weighted_;
};

struct ResistanceEstimates {
  Eigen::VectorXd r;
  Eigen::VectorXd t;
};

struct LambdaMinEstimates {
  double alpha;
  double beta;
};

ResistanceEstimates estimate_resistances(const GraphContext& ctx,
                                         const GraphState& st,
                                         const EstimatorConfig& cfg,
                                         std::uint64_t seed);

LambdaMinEstimates estimate_lambda_mins(const GraphContext& ctx,
                                        const GraphState& st,
                                        const EstimatorConfig& cfg,
                                        std::uint64_t seed);

/// <X^T L^+ X, G>: the probe sum of ||L^{+/2} X y||^2 over the sketch rows.
double probe_trace(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Lpinv,
                   const Eigen::MatrixXd& G);

}  // namespace sparsekit
