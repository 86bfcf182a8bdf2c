#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace sparsekit {

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients for a connected graph Laplacian.
/// Right-hand sides are projected onto the complement of the all-ones vector,
/// as are the iterates, so solutions are orthogonal to the kernel.
/// Convergence means ||Lx - b||_2 <= tol * ||b||_2; otherwise SolverError.
class LaplacianSolver {
 public:
  LaplacianSolver(Eigen::SparseMatrix<double> L, double tol, int max_iter = 0);

  Eigen::VectorXd solve(const Eigen::VectorXd& b, SolveStats* stats = nullptr) const;

  /// Independent solves, one per column (OpenMP over columns).
  Eigen::MatrixXd solve_block(const Eigen::MatrixXd& B) const;
  Eigen::MatrixXd solve_block_serial(const Eigen::MatrixXd& B) const;

  /// The same per-column iteration run in lockstep, so each step is one
  /// sparse-dense product. X0, when given, is the starting guess.
  Eigen::MatrixXd solve_batched(const Eigen::MatrixXd& B,
                                const Eigen::MatrixXd* X0 = nullptr,
                                SolveStats* stats = nullptr) const;

  /// Dense L^+ from n solves against the columns of I - J/n.
  /// warm is an approximation of L^+ to start from (e.g. the previous one).
  Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd* warm = nullptr) const;

  const Eigen::SparseMatrix<double>& matrix() const { return L_; }
  double tolerance() const { return tol_; }
  int max_iterations() const { return max_iter_; }
  int size() const { return static_cast<int>(L_.rows()); }

 private:
  Eigen::SparseMatrix<double> L_;
  Eigen::VectorXd inv_diag_;
  double tol_;
  int max_iter_;
};

}  // namespace sparsekit
