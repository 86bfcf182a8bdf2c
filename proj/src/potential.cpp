#include "sparsekit/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "sparsekit/error.hpp"
#include "sparsekit/kernels.hpp"
#include "sparsekit/log.hpp"

namespace sparsekit {

void check_parameters(int q, double eps) {
  if (q < kMinQ) {
    throw Error(ErrorCode::kInvalidArgument,
                "q must be an integer >= 10, got " + std::to_string(q));
  }
  if (!(eps > 0.0 && eps <= kMaxEps)) {
    throw Error(ErrorCode::kInvalidArgument,
                "eps must lie in (0, 0.1], got " + std::to_string(eps));
  }
  if (eps > kTheoryEps) {
    logger()->warn("eps = {} exceeds 1/120; the analysis constants assume smaller eps",
                   eps);
  }
}

double initial_barrier(int n, int q) {
  return std::pow(2.0 * n, 1.0 / q);
}

BarrierState initial_state(int n, int q, double eps) {
  BarrierState s;
  s.A = Eigen::MatrixXd::Zero(n, n);
  s.u = initial_barrier(n, q);
  s.ell = -s.u;
  s.q = q;
  s.eps = eps;
  return s;
}

SpectralSnapshot::SpectralSnapshot(const BarrierState& s)
    : SpectralSnapshot(s.A, s.u, s.ell) {}

SpectralSnapshot::SpectralSnapshot(const Eigen::MatrixXd& A, double u,
                                   double ell)
    : u_(u), ell_(ell) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kStructural, "eigendecomposition of A failed");
  }
  values_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
  const double lo = values_.minCoeff();
  const double hi = values_.maxCoeff();
  if (!(hi < u - kBarrierMargin)) throw BarrierViolation(hi, ell, u);
  if (!(lo > ell + kBarrierMargin)) throw BarrierViolation(lo, ell, u);
}

double SpectralSnapshot::upper_potential(int q) const {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    sum += std::pow(u_ - values_[i], -q);
  }
  return sum;
}

double SpectralSnapshot::lower_potential(int q) const {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    sum += std::pow(values_[i] - ell_, -q);
  }
  return sum;
}

double SpectralSnapshot::potential(int q) const {
  return upper_potential(q) + lower_potential(q);
}

LambdaExtremes SpectralSnapshot::lambda_extremes() const {
  return {u_ - values_.maxCoeff(), values_.minCoeff() - ell_};
}

Eigen::MatrixXd SpectralSnapshot::spectral_function(
    double (*f)(double, double, double, int), int p) const {
  Eigen::VectorXd d(values_.size());
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    d[i] = f(values_[i], u_, ell_, p);
  }
  Eigen::MatrixXd out = vectors_ * d.asDiagonal() * vectors_.transpose();
  return 0.5 * (out + out.transpose());
}

Eigen::MatrixXd SpectralSnapshot::upper_inverse(int p) const {
  return spectral_function(
      [](double x, double u, double, int k) { return std::pow(u - x, -k); }, p);
}

Eigen::MatrixXd SpectralSnapshot::lower_inverse(int p) const {
  return spectral_function(
      [](double x, double, double l, int k) { return std::pow(x - l, -k); }, p);
}

Eigen::MatrixXd SpectralSnapshot::resistance_operator() const {
  return spectral_function(
      [](double x, double u, double l, int) {
        return 1.0 / (u - x) + 1.0 / (x - l);
      },
      1);
}

double SpectralSnapshot::resistance(const Eigen::VectorXd& v) const {
  const Eigen::VectorXd y = vectors_.transpose() * v;
  double r = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    r += y[i] * y[i] * (1.0 / (u_ - values_[i]) + 1.0 / (values_[i] - ell_));
  }
  return r;
}

Eigen::VectorXd SpectralSnapshot::resistances(const Eigen::MatrixXd& V) const {
  return kernels::column_quadratic_forms(resistance_operator(), V);
}

Eigen::VectorXd SpectralSnapshot::resistances_serial(
    const Eigen::MatrixXd& V) const {
  return kernels::column_quadratic_forms_serial(resistance_operator(), V);
}

double potential(const BarrierState& s) {
  return SpectralSnapshot(s).potential(s.q);
}

double relative_effective_resistance(const BarrierState& s,
                                     const Eigen::VectorXd& v) {
  if (v.size() != s.dim()) {
    throw Error(ErrorCode::kStructural, "vector length does not match A");
  }
  return SpectralSnapshot(s).resistance(v);
}

LambdaExtremes lambda_extremes(const BarrierState& s) {
  return SpectralSnapshot(s).lambda_extremes();
}

double batch_size(int n, int q, double sum_r, const LambdaExtremes& ext) {
  return std::pow(static_cast<double>(n), -2.0 / q) * sum_r *
         std::min(ext.upper, ext.lower);
}

double batch_size(const BarrierState& s,
                  const std::vector<double>& resistances) {
  if (resistances.empty()) {
    throw Error(ErrorCode::kStructural, "empty resistance list");
  }
  const double sum_r =
      std::accumulate(resistances.begin(), resistances.end(), 0.0);
  return batch_size(s.dim(), s.q, sum_r, lambda_extremes(s));
}

BarrierIncrements barrier_increments(int q, double eps, double N,
                                     double sum_r) {
  const double base = eps * N / (q * sum_r);
  return {(1.0 + 2.0 * eps) * base, (1.0 - 2.0 * eps) * base};
}

BarrierIncrements barrier_increments(const BarrierState& s, double N,
                                     double sum_r) {
  return barrier_increments(s.q, s.eps, N, sum_r);
}

Rank1Bounds rank1_potential_bounds(const Eigen::MatrixXd& A, double u,
                                   double ell, int q, double eps,
                                   const Eigen::VectorXd& w) {
  if (q < kMinQ || !(eps > 0.0 && eps <= kMaxEps)) {
    throw Error(ErrorCode::kInvalidArgument,
                "rank-1 bounds need q >= 10 and eps in (0, 0.1]");
  }
  const SpectralSnapshot snap(A, u, ell);
  const Eigen::VectorXd y = snap.eigenvectors().transpose() * w;
  const Eigen::VectorXd& lam = snap.eigenvalues();
  double up1 = 0.0, lo1 = 0.0, upq = 0.0, loq = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    const double a = u - lam[i];
    const double b = lam[i] - ell;
    up1 += y[i] * y[i] / a;
    lo1 += y[i] * y[i] / b;
    upq += y[i] * y[i] * std::pow(a, -(q + 1));
    loq += y[i] * y[i] * std::pow(b, -(q + 1));
  }
  const double limit = eps / q;
  if (up1 > limit || lo1 > limit) {
    throw Error(ErrorCode::kInvalidArgument,
                "rank-1 precondition violated: w^T(uI-A)^{-1}w = " +
                    std::to_string(up1) + ", w^T(A-lI)^{-1}w = " +
                    std::to_string(lo1) + ", limit " + std::to_string(limit));
  }
  const Eigen::MatrixXd Aw = A + w * w.transpose();
  const SpectralSnapshot after(0.5 * (Aw + Aw.transpose()), u, ell);
  Rank1Bounds b;
  b.lhs_lower = after.lower_potential(q);
  b.rhs_lower = snap.lower_potential(q) - q * (1.0 - eps) * loq;
  b.lhs_upper = after.upper_potential(q);
  b.rhs_upper = snap.upper_potential(q) + q * (1.0 + eps) * upq;
  return b;
}

BssBound bss_rank1_bound(const Eigen::MatrixXd& A, double u, double ell,
                         double delta, const Eigen::VectorXd& w) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "delta must lie in (0, 1)");
  }
  const SpectralSnapshot snap(A, u, ell);
  const Eigen::VectorXd y = snap.eigenvectors().transpose() * w;
  const Eigen::VectorXd& lam = snap.eigenvalues();
  double up1 = 0.0, lo1 = 0.0, up2 = 0.0, lo2 = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    const double a = u - lam[i];
    const double b = lam[i] - ell;
    up1 += y[i] * y[i] / a;
    lo1 += y[i] * y[i] / b;
    up2 += y[i] * y[i] / (a * a);
    lo2 += y[i] * y[i] / (b * b);
  }
  if (up1 > delta || lo1 > delta) {
    throw Error(ErrorCode::kInvalidArgument,
                "order-1 precondition violated for the given delta");
  }
  const Eigen::MatrixXd Aw = A + w * w.transpose();
  const SpectralSnapshot after(0.5 * (Aw + Aw.transpose()), u, ell);
  return {after.potential(1),
          snap.potential(1) + up2 / (1.0 - delta) - lo2 / (1.0 + delta)};
}

}  // namespace sparsekit
