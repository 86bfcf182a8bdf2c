#include "sparsekit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sparsekit/error.hpp"

namespace sparsekit {

LaplacianSolver::LaplacianSolver(Eigen::SparseMatrix<double> L, double tol,
                                 int max_iter)
    : L_(std::move(L)), tol_(tol) {
  if (L_.rows() != L_.cols() || L_.rows() < 1) {
    throw Error(ErrorCode::kStructural, "solver needs a square matrix");
  }
  if (!(tol > 0.0 && tol <= 1e-2)) {
    throw Error(ErrorCode::kInvalidArgument, "solver tolerance must lie in (0, 1e-2]");
  }
  const int n = static_cast<int>(L_.rows());
  max_iter_ = max_iter > 0 ? max_iter : std::max(1000, 20 * n);
  L_.makeCompressed();
  const Eigen::VectorXd d = L_.diagonal();
  inv_diag_.resize(n);
  for (int i = 0; i < n; ++i) inv_diag_[i] = d[i] > 0.0 ? 1.0 / d[i] : 1.0;
}

Eigen::VectorXd LaplacianSolver::solve(const Eigen::VectorXd& b_in,
                                       SolveStats* stats) const {
  Eigen::VectorXd b = b_in;
  b.array() -= b.mean();
  const double bnorm = b.norm();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
  if (bnorm == 0.0) {
    if (stats) *stats = {0, 0.0};
    return x;
  }
  Eigen::VectorXd r = b;
  Eigen::VectorXd z(b.size()), p(b.size()), Ap(b.size());
  double rel = 1.0;
  int it = 0;
  // Restarted from the true residual whenever the recurrence claims
  // convergence that the true residual does not confirm.
  while (it < max_iter_) {
    z = inv_diag_.cwiseProduct(r);
    z.array() -= z.mean();
    p = z;
    double rz = r.dot(z);
    while (it < max_iter_) {
      ++it;
      Ap.noalias() = L_ * p;
      const double alpha = rz / p.dot(Ap);
      x.noalias() += alpha * p;
      r.noalias() -= alpha * Ap;
      if (r.norm() <= 0.5 * tol_ * bnorm) break;
      z = inv_diag_.cwiseProduct(r);
      z.array() -= z.mean();
      const double rz_next = r.dot(z);
      p = z + (rz_next / rz) * p;
      rz = rz_next;
    }
    x.array() -= x.mean();
    r = b - L_ * x;
    rel = r.norm() / bnorm;
    if (rel <= tol_) break;
  }
  if (stats) *stats = {it, rel};
  if (!(rel <= tol_)) throw SolverError(rel, it);
  return x;
}

Eigen::MatrixXd LaplacianSolver::solve_block(const Eigen::MatrixXd& B) const {
  Eigen::MatrixXd X(B.rows(), B.cols());
  const Eigen::Index cols = B.cols();
  bool failed = false;
  double worst = 0.0;
  int worst_it = 0;
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < cols; ++c) {
    try {
      X.col(c) = solve(B.col(c));
    } catch (const SolverError& e) {
#pragma omp critical
      {
        failed = true;
        if (e.residual() > worst || std::isnan(e.residual())) {
          worst = e.residual();
          worst_it = e.iterations();
        }
      }
    }
  }
  if (failed) throw SolverError(worst, worst_it);
  return X;
}

Eigen::MatrixXd LaplacianSolver::solve_block_serial(
    const Eigen::MatrixXd& B) const {
  Eigen::MatrixXd X(B.rows(), B.cols());
  for (Eigen::Index c = 0; c < B.cols(); ++c) X.col(c) = solve(B.col(c));
  return X;
}

Eigen::MatrixXd LaplacianSolver::solve_batched(const Eigen::MatrixXd& B_in,
                                               const Eigen::MatrixXd* X0,
                                               SolveStats* stats) const {
  const Eigen::Index n = B_in.rows();
  const Eigen::Index cols = B_in.cols();
  if (n != L_.rows()) {
    throw Error(ErrorCode::kStructural, "right-hand side size does not match the solver");
  }
  // Each right-hand side is a row here: L is symmetric, so L*p becomes p*L,
  // which walks the sparse columns with contiguous dense updates.
  const auto center = [](Eigen::MatrixXd& Y) { Y.colwise() -= Y.rowwise().mean(); };
  Eigen::MatrixXd B = B_in.transpose();
  center(B);
  const Eigen::VectorXd bnorm = B.rowwise().norm();
  Eigen::MatrixXd X;
  if (X0 != nullptr && X0->rows() == n && X0->cols() == cols) {
    X = X0->transpose();
    center(X);
  } else {
    X = Eigen::MatrixXd::Zero(cols, n);
  }
  Eigen::MatrixXd R(cols, n), Z(cols, n), P(cols, n), AP(cols, n);
  std::vector<char> active(cols);
  Eigen::VectorXd alpha(cols), beta(cols), rz(cols), rz_next(cols), pap(cols);
  const auto any_active = [&] {
    return std::any_of(active.begin(), active.end(), [](char c) { return c != 0; });
  };
  int it = 0;
  double worst = 0.0;
  while (true) {
    R.noalias() = X * L_;
    R = B - R;
    worst = 0.0;
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double rel = bnorm[c] > 0.0 ? R.row(c).norm() / bnorm[c] : 0.0;
      worst = std::max(worst, std::isnan(rel) ? INFINITY : rel);
      active[c] = bnorm[c] > 0.0 && !(rel <= tol_);
    }
    if (!any_active() || it >= max_iter_) break;
    Z.noalias() = R * inv_diag_.asDiagonal();
    center(Z);
    P = Z;
    rz = R.cwiseProduct(Z).rowwise().sum();
    while (it < max_iter_) {
      ++it;
      AP.noalias() = P * L_;
      pap = P.cwiseProduct(AP).rowwise().sum();
      for (Eigen::Index c = 0; c < cols; ++c) alpha[c] = active[c] ? rz[c] / pap[c] : 0.0;
      X.noalias() += alpha.asDiagonal() * P;
      R.noalias() -= alpha.asDiagonal() * AP;
      for (Eigen::Index c = 0; c < cols; ++c) {
        if (active[c] && R.row(c).norm() <= 0.5 * tol_ * bnorm[c]) active[c] = 0;
      }
      if (!any_active()) break;
      Z.noalias() = R * inv_diag_.asDiagonal();
      center(Z);
      rz_next = R.cwiseProduct(Z).rowwise().sum();
      for (Eigen::Index c = 0; c < cols; ++c) {
        beta[c] = active[c] ? rz_next[c] / rz[c] : 0.0;
        if (active[c]) rz[c] = rz_next[c];
      }
      P = Z + beta.asDiagonal() * P;
    }
    center(X);
  }
  if (stats) *stats = {it, worst};
  if (!(worst <= tol_)) throw SolverError(worst, it);
  return X.transpose();
}

Eigen::MatrixXd LaplacianSolver::pseudo_inverse(const Eigen::MatrixXd* warm) const {
  const int n = size();
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
  P.array() -= 1.0 / n;
  Eigen::MatrixXd X = solve_batched(P, warm);
  return 0.5 * (X + X.transpose());
}

}  // namespace sparsekit
