#include "sparsekit/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <Eigen/Eigenvalues>

#include "sparsekit/error.hpp"

namespace sparsekit {

Eigen::MatrixXd laplacian(const WeightedGraph& g) {
  const int n = g.n_vertices();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    L(e.a, e.a) += e.w;
    L(e.b, e.b) += e.w;
    L(e.a, e.b) -= e.w;
    L(e.b, e.a) -= e.w;
  }
  return L;
}

SparseMatrix laplacian_sparse(const WeightedGraph& g, const Eigen::VectorXd& c) {
  const int n = g.n_vertices();
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(4 * g.edge_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edge(i);
    const double w = c[static_cast<Eigen::Index>(i)];
    if (w == 0.0) continue;
    t.emplace_back(e.a, e.a, w);
    t.emplace_back(e.b, e.b, w);
    t.emplace_back(e.a, e.b, -w);
    t.emplace_back(e.b, e.a, -w);
  }
  SparseMatrix L(n, n);
  L.setFromTriplets(t.begin(), t.end());
  // Keep the diagonal structurally present for Jacobi preconditioning.
  for (int v = 0; v < n; ++v) L.coeffRef(v, v) += 0.0;
  L.makeCompressed();
  return L;
}

SparseMatrix laplacian_sparse(const WeightedGraph& g) {
  return laplacian_sparse(g, edge_weights(g));
}

SparseMatrix incidence(const WeightedGraph& g) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(2 * g.edge_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edge(i);
    const double r = std::sqrt(e.w);
    t.emplace_back(static_cast<int>(i), e.a, r);
    t.emplace_back(static_cast<int>(i), e.b, -r);
  }
  SparseMatrix B(static_cast<Eigen::Index>(g.edge_count()), g.n_vertices());
  B.setFromTriplets(t.begin(), t.end());
  return B;
}

SparseMatrix signed_incidence(const WeightedGraph& g) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(2 * g.edge_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    t.emplace_back(static_cast<int>(i), g.edge(i).a, 1.0);
    t.emplace_back(static_cast<int>(i), g.edge(i).b, -1.0);
  }
  SparseMatrix B(static_cast<Eigen::Index>(g.edge_count()), g.n_vertices());
  B.setFromTriplets(t.begin(), t.end());
  return B;
}

Eigen::VectorXd edge_weights(const WeightedGraph& g) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(g.edge_count()));
  for (std::size_t i = 0; i < g.edge_count(); ++i) w[i] = g.edge(i).w;
  return w;
}

RangeSpectrum range_spectrum(const Eigen::MatrixXd& L) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kStructural, "eigendecomposition failed");
  }
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double cutoff = 1e-12 * std::max(ev.maxCoeff(), 0.0);
  Eigen::Index first = 0;
  while (first < ev.size() && ev[first] <= cutoff) ++first;
  RangeSpectrum out;
  out.values = ev.tail(ev.size() - first);
  out.vectors = es.eigenvectors().rightCols(ev.size() - first);
  return out;
}

Eigen::MatrixXd pseudo_inverse_sqrt(const Eigen::MatrixXd& L) {
  const RangeSpectrum rs = range_spectrum(L);
  return rs.vectors * rs.values.cwiseInverse().cwiseSqrt().asDiagonal() *
         rs.vectors.transpose();
}

Eigen::MatrixXd ones_complement_basis(int n) {
  // H = I - 2 x x^T / x^T x with x = e_0 - 1/sqrt(n) maps e_0 to 1/sqrt(n).
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, -1.0 / std::sqrt(n));
  x[0] += 1.0;
  const double xx = x.squaredNorm();
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
  if (xx > 0.0) H -= (2.0 / xx) * x * x.transpose();
  return H.rightCols(n - 1);
}

Family parse_family(const std::string& name) {
  if (name == "complete") return Family::kComplete;
  if (name == "grid") return Family::kGrid;
  if (name == "barbell") return Family::kBarbell;
  if (name == "erdos_renyi" || name == "erdos-renyi") return Family::kErdosRenyi;
  throw Error(ErrorCode::kInvalidArgument, "unknown graph family '" + name + "'");
}

std::string to_string(Family f) {
  switch (f) {
    case Family::kComplete: return "complete";
    case Family::kGrid: return "grid";
    case Family::kBarbell: return "barbell";
    case Family::kErdosRenyi: return "erdos_renyi";
  }
  return "unknown";
}

WeightedGraph complete_graph(int n) {
  return generate(Family::kComplete, {.n = n}, 0).graph;
}

WeightedGraph grid_graph(int rows, int cols) {
  return generate(Family::kGrid, {.rows = rows, .cols = cols}, 0).graph;
}

WeightedGraph barbell_graph(int left, int right) {
  return generate(Family::kBarbell, {.left = left, .right = right}, 0).graph;
}

GeneratedGraph generate(Family family, const GeneratorParams& params,
                        std::uint64_t seed) {
  if (!(params.weight_min > 0.0) || params.weight_max < params.weight_min ||
      !std::isfinite(params.weight_max)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid weight range");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(params.weight_min,
                                                params.weight_max);
  const bool unit = params.weight_min == params.weight_max;
  auto next_weight = [&] { return unit ? params.weight_min : weight(rng); };

  std::vector<Edge> edges;
  int n = 0;
  switch (family) {
    case Family::kComplete: {
      n = params.n;
      if (n < 2) throw Error(ErrorCode::kInvalidArgument, "complete graph needs n >= 2");
      for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) edges.push_back({a, b, next_weight()});
      }
      break;
    }
    case Family::kGrid: {
      const int r = params.rows, c = params.cols;
      if (r < 1 || c < 1 || r * c < 2) {
        throw Error(ErrorCode::kInvalidArgument, "grid needs rows*cols >= 2");
      }
      n = r * c;
      for (int i = 0; i < r; ++i) {
        for (int j = 0; j < c; ++j) {
          const int v = i * c + j;
          if (j + 1 < c) edges.push_back({v, v + 1, next_weight()});
          if (i + 1 < r) edges.push_back({v, v + c, next_weight()});
        }
      }
      break;
    }
    case Family::kBarbell: {
      const int l = params.left, r = params.right;
      if (l < 1 || r < 1 || l + r < 2) {
        throw Error(ErrorCode::kInvalidArgument, "barbell needs two non-empty cliques");
      }
      n = l + r;
      for (int a = 0; a < l; ++a) {
        for (int b = a + 1; b < l; ++b) edges.push_back({a, b, next_weight()});
      }
      for (int a = l; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) edges.push_back({a, b, next_weight()});
      }
      edges.push_back({l - 1, l, next_weight()});
      break;
    }
    case Family::kErdosRenyi: {
      n = params.n;
      if (n < 2 || !(params.p >= 0.0 && params.p <= 1.0)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "erdos_renyi needs n >= 2 and p in [0, 1]");
      }
      std::bernoulli_distribution coin(params.p);
      for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
          if (coin(rng)) edges.push_back({a, b, next_weight()});
        }
      }
      break;
    }
  }

  GeneratedGraph out{WeightedGraph(n, edges), false};
  // Repair: join every stray component to the component of vertex 0.
  while (auto pair = find_disconnected_pair(out.graph)) {
    edges.push_back({pair->first, pair->second, next_weight()});
    out.graph = WeightedGraph(n, edges);
    out.repaired = true;
  }
  return out;
}

VerificationReport verify_sparsifier(const WeightedGraph& g,
                                     const WeightedGraph& h, int n_probe,
                                     std::uint64_t seed) {
  if (h.n_vertices() != g.n_vertices()) {
    throw Error(ErrorCode::kInvalidArgument,
                "vertex sets differ: " + std::to_string(g.n_vertices()) +
                    " vs " + std::to_string(h.n_vertices()));
  }
  if (g.n_vertices() > kMaxVerifyVertices) {
    throw Error(ErrorCode::kInvalidArgument,
                "exact verification is limited to " +
                    std::to_string(kMaxVerifyVertices) + " vertices");
  }
  require_connected(g);
  const int n = g.n_vertices();
  const Eigen::MatrixXd Lg = laplacian(g);
  const Eigen::MatrixXd Lh = laplacian(h);

  VerificationReport rep;
  rep.edges_in = g.edge_count();
  rep.edges_out = h.edge_count();

  const RangeSpectrum rs = range_spectrum(Lg);
  const Eigen::VectorXd inv_root = rs.values.cwiseInverse().cwiseSqrt();
  Eigen::MatrixXd M =
      inv_root.asDiagonal() * (rs.vectors.transpose() * Lh * rs.vectors) *
      inv_root.asDiagonal();
  M = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  rep.lambda_lo = es.eigenvalues().minCoeff();
  rep.lambda_hi = es.eigenvalues().maxCoeff();
  rep.epsilon_achieved =
      std::max({0.0, 1.0 - rep.lambda_lo, rep.lambda_hi - 1.0});

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd x(n);
  for (int k = 0; k < n_probe; ++k) {
    for (int i = 0; i < n; ++i) x[i] = normal(rng);
    x.array() -= x.mean();
    rep.quad_form_samples.push_back(x.dot(Lh * x) / x.dot(Lg * x));
  }
  return rep;
}

}  // namespace sparsekit
