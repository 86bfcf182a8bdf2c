#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace sparsekit {

inline constexpr double kBarrierMargin = 1e-10;
inline constexpr int kMinQ = 10;
inline constexpr double kMaxEps = 0.1;
inline constexpr double kTheoryEps = 1.0 / 120.0;

/// Throws Error(kInvalidArgument) for q < 10 or eps outside (0, 1/10].
/// Logs a warning for eps > 1/120.
void check_parameters(int q, double eps);

struct BarrierState {
  Eigen::MatrixXd A;
  double u = 0.0;
  double ell = 0.0;
  std::int64_t j = 0;
  int q = kMinQ;
  double eps = 0.0;

  int dim() const { return static_cast<int>(A.rows()); }
};

/// (2n)^{1/q}
double initial_barrier(int n, int q);

/// A = 0, u = (2n)^{1/q}, ell = -(2n)^{1/q}.
BarrierState initial_state(int n, int q, double eps);

struct LambdaExtremes {
  double upper;  // lambda_min(uI - A)
  double lower;  // lambda_min(A - ell I)
};

/// One eigendecomposition of A, shared by every matrix function of the state.
/// Construction throws BarrierViolation when an eigenvalue is within the
/// margin of either barrier.
class SpectralSnapshot {
 public:
  explicit SpectralSnapshot(const BarrierState& s);
  SpectralSnapshot(const Eigen::MatrixXd& A, double u, double ell);

  const Eigen::VectorXd& eigenvalues() const { return values_; }
  const Eigen::MatrixXd& eigenvectors() const { return vectors_; }

  /// tr(uI-A)^{-q} + tr(A-ell I)^{-q}
  double potential(int q) const;
  double upper_potential(int q) const;
  double lower_potential(int q) const;

  LambdaExtremes lambda_extremes() const;

  /// (uI-A)^{-p}
  Eigen::MatrixXd upper_inverse(int p = 1) const;
  /// (A-ell I)^{-p}
  Eigen::MatrixXd lower_inverse(int p = 1) const;
  /// (uI-A)^{-1} + (A-ell I)^{-1}
  Eigen::MatrixXd resistance_operator() const;

  double resistance(const Eigen::VectorXd& v) const;
  /// R_i for every column of V (OpenMP kernel).
  Eigen::VectorXd resistances(const Eigen::MatrixXd& V) const;
  Eigen::VectorXd resistances_serial(const Eigen::MatrixXd& V) const;

  double u() const { return u_; }
  double ell() const { return ell_; }

 private:
  Eigen::MatrixXd spectral_function(double (*f)(double, double, double, int),
                                    int p) const;

  Eigen::VectorXd values_;
  Eigen::MatrixXd vectors_;
  double u_;
  double ell_;
};

double potential(const BarrierState& s);

/// v^T (uI-A)^{-1} v + v^T (A-ell I)^{-1} v
double relative_effective_resistance(const BarrierState& s,
                                     const Eigen::VectorXd& v);

LambdaExtremes lambda_extremes(const BarrierState& s);

/// n^{-2/q} * sum(R) * min(lambda_min(uI-A), lambda_min(A-ell I)).
double batch_size(const BarrierState& s, const std::vector<double>& resistances);
double batch_size(int n, int q, double sum_r, const LambdaExtremes& ext);

struct BarrierIncrements {
  double du;
  double dl;
};

/// du = (1+2 eps) eps N / (q sumR), dl = (1-2 eps) eps N / (q sumR).
BarrierIncrements barrier_increments(const BarrierState& s, double N,
                                     double sum_r);
BarrierIncrements barrier_increments(int q, double eps, double N, double sum_r);

struct Rank1Bounds {
  double lhs_lower;  // tr(A + ww^T - ell I)^{-q}
  double rhs_lower;  // tr(A - ell I)^{-q} - q(1-eps) w^T (A - ell I)^{-(q+1)} w
  double lhs_upper;  // tr(uI - A - ww^T)^{-q}
  double rhs_upper;  // tr(uI - A)^{-q} + q(1+eps) w^T (uI - A)^{-(q+1)} w
};

/// Both sides of the rank-1 update inequalities for the order-q potential.
/// Requires w^T(uI-A)^{-1}w <= eps/q, w^T(A-ell I)^{-1}w <= eps/q, q >= 10 and
/// eps <= 1/10; otherwise throws Error(kInvalidArgument).
Rank1Bounds rank1_potential_bounds(const Eigen::MatrixXd& A, double u,
                                   double ell, int q, double eps,
                                   const Eigen::VectorXd& w);

struct BssBound {
  double lhs;  // Phi^{(1)}(A + ww^T)
  double rhs;  // Phi^{(1)}(A) + w^T(uI-A)^{-2}w/(1-delta)
               //   - w^T(A-ell I)^{-2}w/(1+delta)
};

/// Order-1 analogue used by the randomized BSS baseline. Requires
/// ww^T <= delta(uI-A) and ww^T <= delta(A-ell I) with 0 < delta < 1.
BssBound bss_rank1_bound(const Eigen::MatrixXd& A, double u, double ell,
                         double delta, const Eigen::VectorXd& w);

}  // namespace sparsekit
