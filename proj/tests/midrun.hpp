#pragma once

// Mid-run states of exact-mode runs with dense vertex-space oracles, shared by
// the estimator tests and the acceptance binary.

#include <algorithm>
#include <vector>

#include <Eigen/Dense>

#include "sparsekit/fastpath.hpp"
#include "sparsekit/graph.hpp"
#include "sparsekit/sparsifier.hpp"
#include "sparsekit/vectorset.hpp"
#include "support.hpp"

namespace testing {

using namespace sparsekit;

// A state of an exact-mode run together with dense vertex-space oracles:
//   y^T (uL - Lt)^+ y   = x^T (uI - A)^{-1} x
//   y^T (Lt - ell L)^+ y = x^T (A - ell I)^{-1} x      for x = L^{+/2} y.
struct MidRun {
  WeightedGraph g;
  GraphState st;
  Eigen::MatrixXd L;
  Eigen::MatrixXd Lt;
  Eigen::MatrixXd upper;  // (uL - Lt)^+
  Eigen::MatrixXd lower;  // (Lt - ell L)^+
  Eigen::VectorXd lambda;  // spectrum of A on the complement of ones
};

inline Eigen::MatrixXd range_pinv(const Eigen::MatrixXd& M) {
  const auto n = M.rows();
  const Eigen::MatrixXd J = Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  return oracle_inverse(M + J) - J;
}

inline MidRun make_mid_run(const WeightedGraph& g, const GraphState& st) {
  MidRun r{g, st, oracle_laplacian(g), {}, {}, {}, {}};
  std::vector<Edge> kept;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    if (st.s[static_cast<Eigen::Index>(i)] > 0.0) {
      Edge e = g.edge(i);
      e.w *= st.s[static_cast<Eigen::Index>(i)];
      kept.push_back(e);
    }
  }
  r.Lt = kept.empty() ? Eigen::MatrixXd::Zero(g.n_vertices(), g.n_vertices())
                      : oracle_laplacian(WeightedGraph(g.n_vertices(), kept));
  r.upper = range_pinv(st.u * r.L - r.Lt);
  r.lower = range_pinv(r.Lt - st.ell * r.L);
  r.lambda = oracle_relative_spectrum(r.L, r.Lt);
  return r;
}

/// Exact-mode run stopped at the first iteration where `stop` holds.
template <typename Pred>
MidRun run_until(const WeightedGraph& g, double eps, std::uint64_t seed, Pred stop) {
  RunOptions opt;
  opt.q = 10;
  opt.eps = eps;
  opt.seed = seed;
  opt.check_half_barrier = false;
  AlmostLinearSampler s(from_graph(g), opt);
  while (!s.done() && !stop(s)) s.step();
  GraphState st;
  st.s = Eigen::Map<const Eigen::VectorXd>(s.scalars().data(),
                                           static_cast<Eigen::Index>(s.scalars().size()));
  st.u = s.u();
  st.ell = s.ell();
  return make_mid_run(g, st);
}

inline MidRun negative_ell_state(const WeightedGraph& g, double eps, std::uint64_t seed) {
  return run_until(g, eps, seed, [](const AlmostLinearSampler& s) {
    return s.ell() > -0.5 * s.u() * 0.5 && s.iteration() > 20;
  });
}

inline MidRun positive_ell_state(const WeightedGraph& g, double eps, std::uint64_t seed) {
  return run_until(g, eps, seed, [](const AlmostLinearSampler& s) { return s.ell() > 0.3 * s.u(); });
}

/// Config whose separation matches the actual spectrum of the state.
inline EstimatorConfig config_for(const MidRun& r, double eps = 0.1) {
  const double lmax = r.lambda.maxCoeff();
  const double lmin = r.lambda.minCoeff();
  double sep = 1.0 - lmax / r.st.u;
  if (r.st.ell > 0.0) sep = std::min(sep, 1.0 - r.st.ell / lmin);
  EstimatorConfig cfg;
  cfg.eps = eps;
  cfg.eta = std::min(0.5, 0.9 * sep);
  return cfg;
}

inline Eigen::MatrixXd centered_gaussian(Rng& rng, int n, int cols) {
  Eigen::MatrixXd Y = gaussian_matrix(rng, n, cols);
  Y.rowwise() -= Y.colwise().mean();
  return Y;
}

/// Largest relative error of squared column norms of F against y^T M y.
inline double max_form_error(const Eigen::MatrixXd& F, const Eigen::MatrixXd& Y,
                      const Eigen::MatrixXd& M) {
  double worst = 0.0;
  for (Eigen::Index c = 0; c < Y.cols(); ++c) {
    const double want = Y.col(c).dot(M * Y.col(c));
    worst = std::max(worst, relative_error(F.col(c).squaredNorm(), want));
  }
  return worst;
}

inline Eigen::VectorXd exact_edge_forms(const MidRun& r, const Eigen::MatrixXd& M) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(r.g.edge_count()));
  for (std::size_t i = 0; i < r.g.edge_count(); ++i) {
    const Edge& e = r.g.edge(i);
    out[static_cast<Eigen::Index>(i)] = e.w * (M(e.a, e.a) + M(e.b, e.b) - 2.0 * M(e.a, e.b));
  }
  return out;
}

inline double max_band_error(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
  return ((got - want).cwiseAbs().array() / want.array()).maxCoeff();
}

}  // namespace testing
