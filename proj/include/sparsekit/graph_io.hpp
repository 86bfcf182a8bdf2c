#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sparsekit/graph.hpp"

namespace sparsekit {

enum class GraphFormat { kTsv, kMatrixMarket };

GraphFormat parse_graph_format(const std::string& name);

/// One edge per line as `a<TAB>b<TAB>w` with 0-based ids. Blank lines and
/// lines starting with '#' are skipped, except `# vertices <n>` which fixes
/// the vertex count.
WeightedGraph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const WeightedGraph& g);

/// Matrix Market `coordinate real symmetric` holding a graph Laplacian.
/// Off-diagonal entries must be negative; diagonal entries, if present, must
/// match the weighted degree.
WeightedGraph read_matrix_market(std::istream& in);
void write_matrix_market(std::ostream& out, const WeightedGraph& g);

WeightedGraph load_graph(const std::string& path, GraphFormat format);
void save_graph(const std::string& path, const WeightedGraph& g,
                GraphFormat format);

/// General rank-1 input: a header line `n m`, then m lines of n reals.
/// Returned matrix is n x m with one vector per column.
Eigen::MatrixXd read_vectors(std::istream& in);
void write_vectors(std::ostream& out, const Eigen::MatrixXd& vectors);

/// One scalar per line, full precision.
void write_scalars(std::ostream& out, const std::vector<double>& s);

/// Shortest round-trip representation used by every writer.
std::string format_real(double x);

}  // namespace sparsekit
