#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sparsekit/graph.hpp"

namespace sparsekit {

enum class Subspace {
  kFull,            // sum v_i v_i^T = I on R^n
  kOnesComplement,  // sum v_i v_i^T = I - J/n (graphs)
};

/// Rank-1 decomposition v_1..v_m in R^n, stored as the columns of an n x m
/// matrix. Graph-derived sets carry the source graph as provenance; column i
/// comes from edge i.
class VectorSet {
 public:
  VectorSet(Eigen::MatrixXd vectors, Subspace subspace = Subspace::kFull,
            std::optional<WeightedGraph> provenance = std::nullopt);

  int dim() const { return static_cast<int>(vectors_.rows()); }
  int count() const { return static_cast<int>(vectors_.cols()); }
  const Eigen::MatrixXd& vectors() const { return vectors_; }
  Subspace subspace() const { return subspace_; }
  const std::optional<WeightedGraph>& provenance() const { return provenance_; }

  /// Dimension of the declared subspace (n or n-1).
  int subspace_dim() const;

  /// The vectors in an orthonormal basis of the declared subspace, so that
  /// the identity holds on the whole reduced space. subspace_dim() x m.
  Eigen::MatrixXd reduced() const;

 private:
  Eigen::MatrixXd vectors_;
  Subspace subspace_;
  std::optional<WeightedGraph> provenance_;
};

struct ValidationReport {
  double deviation = 0.0;  // Frobenius norm of sum v v^T - I on the subspace
  double threshold = 0.0;  // tol * ||I||_F
  bool pass = false;
};

inline constexpr double kDefaultDecompositionTol = 1e-8;

ValidationReport validate_decomposition(const VectorSet& vs,
                                        double tol = kDefaultDecompositionTol);

/// Columns of mismatched length or non-finite entries are a structural error.
VectorSet make_vector_set(const std::vector<Eigen::VectorXd>& vectors,
                          Subspace subspace = Subspace::kFull);

/// v_i = L^{+/2} sqrt(w_i) (e_a - e_b). g must be connected.
VectorSet from_graph(const WeightedGraph& g);

struct SparsifierResult;

/// Keeps edges with s_i != 0 and gives them weight rescale * s_i * w_i.
WeightedGraph extract_sparsifier(const WeightedGraph& g,
                                 const SparsifierResult& result);
WeightedGraph extract_sparsifier(const WeightedGraph& g,
                                 const std::vector<double>& scalars,
                                 double rescale);

}  // namespace sparsekit
