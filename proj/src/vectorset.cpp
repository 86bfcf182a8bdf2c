#include "sparsekit/vectorset.hpp"

#include <cmath>
#include <string>

#include "sparsekit/error.hpp"
#include "sparsekit/graphs.hpp"
#include "sparsekit/sparsifier.hpp"

namespace sparsekit {

VectorSet::VectorSet(Eigen::MatrixXd vectors, Subspace subspace,
                     std::optional<WeightedGraph> provenance)
    : vectors_(std::move(vectors)),
      subspace_(subspace),
      provenance_(std::move(provenance)) {
  if (vectors_.rows() < 1 || vectors_.cols() < 1) {
    throw Error(ErrorCode::kStructural, "vector set is empty");
  }
  if (!vectors_.allFinite()) {
    throw Error(ErrorCode::kStructural, "vector set has non-finite entries");
  }
  if (subspace_ == Subspace::kOnesComplement && vectors_.rows() < 2) {
    throw Error(ErrorCode::kStructural,
                "ones-complement subspace needs dimension >= 2");
  }
  if (provenance_ &&
      (provenance_->edge_count() != static_cast<std::size_t>(vectors_.cols()) ||
       provenance_->n_vertices() != vectors_.rows())) {
    throw Error(ErrorCode::kStructural,
                "provenance graph does not match the vector set shape");
  }
}

int VectorSet::subspace_dim() const {
  return subspace_ == Subspace::kFull ? dim() : dim() - 1;
}

Eigen::MatrixXd VectorSet::reduced() const {
  if (subspace_ == Subspace::kFull) return vectors_;
  return ones_complement_basis(dim()).transpose() * vectors_;
}

ValidationReport validate_decomposition(const VectorSet& vs, double tol) {
  const Eigen::MatrixXd& V = vs.vectors();
  const int n = vs.dim();
  Eigen::MatrixXd target = Eigen::MatrixXd::Identity(n, n);
  if (vs.subspace() == Subspace::kOnesComplement) {
    target.array() -= 1.0 / n;
  }
  ValidationReport rep;
  rep.deviation = (V * V.transpose() - target).norm();
  rep.threshold = tol * std::sqrt(static_cast<double>(vs.subspace_dim()));
  rep.pass = rep.deviation <= rep.threshold && vs.count() >= vs.subspace_dim();
  return rep;
}

VectorSet make_vector_set(const std::vector<Eigen::VectorXd>& vectors,
                          Subspace subspace) {
  if (vectors.empty()) throw Error(ErrorCode::kStructural, "no vectors");
  const Eigen::Index n = vectors.front().size();
  Eigen::MatrixXd V(n, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != n) {
      throw Error(ErrorCode::kStructural,
                  "vector " + std::to_string(i) + " has length " +
                      std::to_string(vectors[i].size()) + ", expected " +
                      std::to_string(n));
    }
    V.col(static_cast<Eigen::Index>(i)) = vectors[i];
  }
  return VectorSet(std::move(V), subspace);
}

VectorSet from_graph(const WeightedGraph& g) {
  require_connected(g);
  if (g.n_vertices() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "graph needs at least two vertices");
  }
  const Eigen::MatrixXd root = pseudo_inverse_sqrt(laplacian(g));
  const Eigen::MatrixXd U = Eigen::MatrixXd(incidence(g)).transpose();
  return VectorSet(root * U, Subspace::kOnesComplement, g);
}

WeightedGraph extract_sparsifier(const WeightedGraph& g,
                                 const std::vector<double>& scalars,
                                 double rescale) {
  if (scalars.size() != g.edge_count()) {
    throw Error(ErrorCode::kStructural,
                "scalar count does not match the edge count");
  }
  std::vector<Edge> kept;
  for (std::size_t i = 0; i < scalars.size(); ++i) {
    if (scalars[i] != 0.0) {
      Edge e = g.edge(i);
      e.w *= rescale * scalars[i];
      kept.push_back(e);
    }
  }
  return WeightedGraph(g.n_vertices(), std::move(kept));
}

WeightedGraph extract_sparsifier(const WeightedGraph& g,
                                 const SparsifierResult& result) {
  if (!result.graph_mode) {
    throw Error(ErrorCode::kMissingProvenance,
                "result was not produced from a graph vector set");
  }
  return extract_sparsifier(g, result.scalars, result.rescale);
}

}  // namespace sparsekit
