#pragma once

// Shared generators and independent oracles for the test binaries.
// Oracles deliberately take a different numerical route from the library:
// LU inverses instead of eigendecompositions, the general (nonsymmetric)
// eigensolver instead of the self-adjoint one, explicit loops instead of
// kernels.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sparsekit/graph.hpp"

namespace testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Eigen::VectorXd gaussian_vector(Rng& rng, int n) {
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = nd(rng);
  return v;
}

inline Eigen::MatrixXd gaussian_matrix(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd M(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) M(i, j) = nd(rng);
  return M;
}

inline Eigen::MatrixXd random_orthogonal(Rng& rng, int n) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian_matrix(rng, n, n));
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
}

/// Symmetric matrix with the given spectrum in a random basis.
inline Eigen::MatrixXd with_spectrum(Rng& rng, const Eigen::VectorXd& values) {
  const Eigen::MatrixXd Q = random_orthogonal(rng, static_cast<int>(values.size()));
  Eigen::MatrixXd A = Q * values.asDiagonal() * Q.transpose();
  return 0.5 * (A + A.transpose());
}

/// Random admissible barrier state: eigenvalues of A strictly inside
/// (ell, u) with at least `margin` clearance.
struct RandomState {
  Eigen::MatrixXd A;
  double u;
  double ell;
};

inline RandomState random_state(Rng& rng, int n, double margin = 0.05) {
  const double ell = uniform(rng, -2.0, 1.0);
  const double u = ell + uniform(rng, 1.0, 4.0);
  Eigen::VectorXd lam(n);
  for (int i = 0; i < n; ++i) lam[i] = uniform(rng, ell + margin * (u - ell), u - margin * (u - ell));
  return {with_spectrum(rng, lam), u, ell};
}

/// Connected graph: a random spanning tree plus extra edges.
inline sparsekit::WeightedGraph random_connected_graph(Rng& rng, int n, double extra_p,
                                                       double wmin = 0.5,
                                                       double wmax = 2.0) {
  std::vector<sparsekit::Edge> edges;
  std::set<std::pair<int, int>> seen;
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  auto add = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    if (a == b || !seen.insert({a, b}).second) return;
    edges.push_back({a, b, uniform(rng, wmin, wmax)});
  };
  for (int i = 1; i < n; ++i) add(order[i], order[uniform_int(rng, 0, i - 1)]);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (uniform(rng, 0.0, 1.0) < extra_p) add(a, b);
  return sparsekit::WeightedGraph(n, edges);
}

// ---- oracles ---------------------------------------------------------------

/// Laplacian by explicit accumulation over edges.
inline Eigen::MatrixXd oracle_laplacian(const sparsekit::WeightedGraph& g) {
  const int n = g.n_vertices();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    L(e.a, e.a) += e.w;
    L(e.b, e.b) += e.w;
    L(e.a, e.b) -= e.w;
    L(e.b, e.a) -= e.w;
  }
  return L;
}

/// L^+ = (L + J/n)^{-1} - J/n for a connected graph Laplacian.
inline Eigen::MatrixXd oracle_pinv(const Eigen::MatrixXd& L) {
  const auto n = L.rows();
  const Eigen::MatrixXd J = Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  return Eigen::FullPivLU<Eigen::MatrixXd>(L + J).inverse() - J;
}

inline Eigen::MatrixXd oracle_inverse(const Eigen::MatrixXd& M) {
  return Eigen::FullPivLU<Eigen::MatrixXd>(M).inverse();
}

/// Eigenvalues of a symmetric matrix through the general real solver, sorted.
inline Eigen::VectorXd oracle_eigenvalues(const Eigen::MatrixXd& M) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  Eigen::VectorXd v = es.eigenvalues().real();
  std::sort(v.data(), v.data() + v.size());
  return v;
}

/// Generalized eigenvalues of (Lh, Lg) on the complement of the ones vector:
/// eigenvalues of Lg^+ Lh restricted to its range, via the nonsymmetric solver.
inline Eigen::VectorXd oracle_relative_spectrum(const Eigen::MatrixXd& Lg,
                                                const Eigen::MatrixXd& Lh) {
  const auto n = Lg.rows();
  const Eigen::MatrixXd J = Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  // (Lg + J)^{-1}(Lh + J) has the relative spectrum plus one eigenvalue 1 on
  // the ones vector; that eigenvector is found and its value removed.
  const Eigen::MatrixXd M = oracle_inverse(Lg + J) * (Lh + J);
  Eigen::EigenSolver<Eigen::MatrixXd> es(M);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
  Eigen::Index skip = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd v = es.eigenvectors().col(i).real().normalized();
    const double c = std::abs(v.dot(ones));
    if (c > best) {
      best = c;
      skip = i;
    }
  }
  std::vector<double> out;
  for (Eigen::Index i = 0; i < n; ++i)
    if (i != skip) out.push_back(es.eigenvalues()[i].real());
  std::sort(out.begin(), out.end());
  return Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

/// Integer power of a symmetric positive definite matrix by repeated
/// multiplication of its LU inverse.
inline Eigen::MatrixXd oracle_inverse_power(const Eigen::MatrixXd& M, int p) {
  const Eigen::MatrixXd inv = oracle_inverse(M);
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(M.rows(), M.cols());
  for (int i = 0; i < p; ++i) out = out * inv;
  return out;
}

inline double relative_error(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace testing
