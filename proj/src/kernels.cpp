#include "sparsekit/kernels.hpp"

#include <algorithm>

namespace sparsekit::kernels {

Eigen::VectorXd column_quadratic_forms(const Eigen::MatrixXd& M,
                                       const Eigen::MatrixXd& V) {
  const Eigen::Index m = V.cols();
  Eigen::VectorXd out(m);
  const Eigen::Index blocks = (m + kColumnBlock - 1) / kColumnBlock;
#pragma omp parallel for schedule(static)
  for (Eigen::Index blk = 0; blk < blocks; ++blk) {
    const Eigen::Index start = blk * kColumnBlock;
    const Eigen::Index width = std::min(kColumnBlock, m - start);
    const auto Vb = V.middleCols(start, width);
    const Eigen::MatrixXd MV = M * Vb;
    for (Eigen::Index c = 0; c < width; ++c) {
      out[start + c] = Vb.col(c).dot(MV.col(c));
    }
  }
  return out;
}

Eigen::VectorXd column_quadratic_forms_serial(const Eigen::MatrixXd& M,
                                              const Eigen::MatrixXd& V) {
  Eigen::VectorXd out(V.cols());
  Eigen::VectorXd y(M.rows());
  for (Eigen::Index i = 0; i < V.cols(); ++i) {
    y.noalias() = M * V.col(i);
    out[i] = V.col(i).dot(y);
  }
  return out;
}

Eigen::VectorXd edge_quadratic_forms(const Eigen::MatrixXd& H,
                                     const std::vector<Edge>& edges,
                                     const Eigen::VectorXd& scale) {
  const Eigen::Index m = static_cast<Eigen::Index>(edges.size());
  Eigen::VectorXd out(m);
#pragma omp parallel for schedule(static, 256)
  for (Eigen::Index i = 0; i < m; ++i) {
    const Edge& e = edges[i];
    out[i] = scale[i] * (H(e.a, e.a) + H(e.b, e.b) - H(e.a, e.b) - H(e.b, e.a));
  }
  return out;
}

Eigen::VectorXd edge_quadratic_forms_serial(const Eigen::MatrixXd& H,
                                            const std::vector<Edge>& edges,
                                            const Eigen::VectorXd& scale) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(edges.size()));
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    out[i] = scale[i] * (H(e.a, e.a) + H(e.b, e.b) - H(e.a, e.b) - H(e.b, e.a));
  }
  return out;
}

Eigen::MatrixXd weighted_outer_sum(const Eigen::MatrixXd& V,
                                   const std::vector<Eigen::Index>& columns,
                                   const std::vector<double>& c) {
  const Eigen::Index k = static_cast<Eigen::Index>(columns.size());
  Eigen::MatrixXd S(V.rows(), k);
  for (Eigen::Index j = 0; j < k; ++j) S.col(j) = V.col(columns[j]);
  Eigen::MatrixXd Sc = S;
  for (Eigen::Index j = 0; j < k; ++j) Sc.col(j) *= c[j];
  Eigen::MatrixXd W = Sc * S.transpose();
  return 0.5 * (W + W.transpose());
}

}  // namespace sparsekit::kernels
