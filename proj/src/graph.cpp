#include "sparsekit/graph.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "sparsekit/error.hpp"

namespace sparsekit {

WeightedGraph::WeightedGraph(int n_vertices, std::vector<Edge> edges)
    : n_vertices_(n_vertices), edges_(std::move(edges)) {
  if (n_vertices_ < 1) {
    throw Error(ErrorCode::kInvalidArgument, "graph needs at least one vertex");
  }
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    Edge& e = edges_[i];
    const std::string where = "edge " + std::to_string(i) + " (" +
                              std::to_string(e.a) + ", " + std::to_string(e.b) +
                              ")";
    if (e.a < 0 || e.b < 0 || e.a >= n_vertices_ || e.b >= n_vertices_) {
      throw Error(ErrorCode::kInvalidArgument,
                  where + ": vertex id out of range [0, " +
                      std::to_string(n_vertices_) + ")");
    }
    if (e.a == e.b) {
      throw Error(ErrorCode::kInvalidArgument, where + ": self loop");
    }
    if (!std::isfinite(e.w) || e.w <= 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  where + ": weight must be positive and finite");
    }
    if (e.a > e.b) std::swap(e.a, e.b);
    if (!seen.emplace(e.a, e.b).second) {
      throw Error(ErrorCode::kInvalidArgument, where + ": duplicate edge");
    }
  }
}

WeightedGraph WeightedGraph::scaled(double c) const {
  std::vector<Edge> out = edges_;
  for (Edge& e : out) e.w *= c;
  return WeightedGraph(n_vertices_, std::move(out));
}

namespace {

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

std::optional<std::pair<int, int>> find_disconnected_pair(
    const WeightedGraph& g) {
  std::vector<int> parent(g.n_vertices());
  std::iota(parent.begin(), parent.end(), 0);
  for (const Edge& e : g.edges()) {
    int ra = find_root(parent, e.a);
    int rb = find_root(parent, e.b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  const int r0 = find_root(parent, 0);
  for (int v = 1; v < g.n_vertices(); ++v) {
    if (find_root(parent, v) != r0) return std::make_pair(0, v);
  }
  return std::nullopt;
}

bool is_connected(const WeightedGraph& g) {
  return !find_disconnected_pair(g).has_value();
}

void require_connected(const WeightedGraph& g) {
  if (auto pair = find_disconnected_pair(g)) {
    throw DisconnectedGraphError(pair->first, pair->second);
  }
}

}  // namespace sparsekit
