#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace sparsekit {

struct Edge {
  int a = 0;
  int b = 0;
  double w = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected weighted graph. Endpoints are stored with a < b; input order of
/// edges is preserved so that edge index i stays meaningful for provenance.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// Throws Error(kInvalidArgument) on self loops, out-of-range ids,
  /// non-positive or non-finite weights, and duplicate unordered pairs.
  WeightedGraph(int n_vertices, std::vector<Edge> edges);

  int n_vertices() const { return n_vertices_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_[i]; }

  WeightedGraph scaled(double c) const;

 private:
  int n_vertices_ = 0;
  std::vector<Edge> edges_;
};

/// A pair of vertices in different components, or nullopt when connected.
std::optional<std::pair<int, int>> find_disconnected_pair(const WeightedGraph& g);

bool is_connected(const WeightedGraph& g);

/// Throws DisconnectedGraphError naming a pair with no path.
void require_connected(const WeightedGraph& g);

}  // namespace sparsekit
