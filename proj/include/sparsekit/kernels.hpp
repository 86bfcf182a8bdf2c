#pragma once

#include <vector>

#include <Eigen/Dense>

#include "sparsekit/graph.hpp"

// Data-parallel inner loops. Every OpenMP kernel has a *_serial twin with the
// same arithmetic per output entry; tests compare the two and bench/ times
// them. Work is split into fixed-size blocks so results do not depend on the
// thread count.

namespace sparsekit::kernels {

inline constexpr Eigen::Index kColumnBlock = 64;

/// out[i] = V.col(i)^T M V.col(i) for symmetric M.
Eigen::VectorXd column_quadratic_forms(const Eigen::MatrixXd& M,
                                       const Eigen::MatrixXd& V);
Eigen::VectorXd column_quadratic_forms_serial(const Eigen::MatrixXd& M,
                                              const Eigen::MatrixXd& V);

/// out[i] = scale[i] * (H(a,a) + H(b,b) - H(a,b) - H(b,a)) for edge i = (a,b).
Eigen::VectorXd edge_quadratic_forms(const Eigen::MatrixXd& H,
                                     const std::vector<Edge>& edges,
                                     const Eigen::VectorXd& scale);
Eigen::VectorXd edge_quadratic_forms_serial(const Eigen::MatrixXd& H,
                                            const std::vector<Edge>& edges,
                                            const Eigen::VectorXd& scale);

/// sum_i c[i] * V.col(i) V.col(i)^T over the listed columns.
Eigen::MatrixXd weighted_outer_sum(const Eigen::MatrixXd& V,
                                   const std::vector<Eigen::Index>& columns,
                                   const std::vector<double>& c);

}  // namespace sparsekit::kernels
