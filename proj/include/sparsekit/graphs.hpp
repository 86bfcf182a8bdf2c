#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "sparsekit/graph.hpp"

namespace sparsekit {

using SparseMatrix = Eigen::SparseMatrix<double>;

Eigen::MatrixXd laplacian(const WeightedGraph& g);
SparseMatrix laplacian_sparse(const WeightedGraph& g);

/// Laplacian of the same edge set with edge i weighted by c[i] instead of w_i.
/// Zero entries are allowed (edge absent).
SparseMatrix laplacian_sparse(const WeightedGraph& g, const Eigen::VectorXd& c);

/// m x n incidence with row i = sqrt(w_i) (e_a - e_b), so that L = B^T B.
SparseMatrix incidence(const WeightedGraph& g);

/// m x n incidence with row i = e_a - e_b.
SparseMatrix signed_incidence(const WeightedGraph& g);

Eigen::VectorXd edge_weights(const WeightedGraph& g);

/// Eigenpairs of a Laplacian on its range: eigenvalues below
/// 1e-12 * lambda_max are treated as kernel and dropped.
struct RangeSpectrum {
  Eigen::VectorXd values;   // r positive eigenvalues, ascending
  Eigen::MatrixXd vectors;  // n x r
};

RangeSpectrum range_spectrum(const Eigen::MatrixXd& L);

/// L^{+/2}: square root of the Moore-Penrose pseudo-inverse.
Eigen::MatrixXd pseudo_inverse_sqrt(const Eigen::MatrixXd& L);

/// n x (n-1) matrix with orthonormal columns spanning the complement of the
/// all-ones vector (columns 2..n of a Householder reflector).
Eigen::MatrixXd ones_complement_basis(int n);

enum class Family { kComplete, kGrid, kBarbell, kErdosRenyi };

Family parse_family(const std::string& name);
std::string to_string(Family f);

struct GeneratorParams {
  int n = 0;      // complete, erdos_renyi
  int rows = 0;   // grid
  int cols = 0;   // grid
  int left = 0;   // barbell clique sizes
  int right = 0;
  double p = 0.0;  // erdos_renyi edge probability
  double weight_min = 1.0;
  double weight_max = 1.0;
};

struct GeneratedGraph {
  WeightedGraph graph;
  bool repaired = false;  // edges were added to connect components
};

/// Deterministic given (family, params, seed). Weights are uniform in
/// [weight_min, weight_max]; the default is unit weights.
GeneratedGraph generate(Family family, const GeneratorParams& params,
                        std::uint64_t seed);

WeightedGraph complete_graph(int n);
WeightedGraph grid_graph(int rows, int cols);
WeightedGraph barbell_graph(int left, int right);

struct VerificationReport {
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  double epsilon_achieved = 0.0;
  std::size_t edges_in = 0;
  std::size_t edges_out = 0;
  std::vector<double> quad_form_samples;
};

inline constexpr int kMaxVerifyVertices = 2000;

/// Exact generalized eigenvalues of (L_h, L_g) on the complement of the
/// all-ones vector, plus n_probe Rayleigh quotients of projected normal
/// vectors. g must be connected; h must have the same vertex count.
VerificationReport verify_sparsifier(const WeightedGraph& g,
                                     const WeightedGraph& h, int n_probe,
                                     std::uint64_t seed);

}  // namespace sparsekit
