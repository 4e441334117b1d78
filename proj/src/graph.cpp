#include "consensus_lab/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <string>

#include "consensus_lab/errors.hpp"

namespace consensus_lab {

Graph build_graph(int n, const std::vector<Edge>& edges) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "agent count must be >= 1");

  Graph g;
  g.n = n;
  g.adjacency = Matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(n));

  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges) {
    if (e.a < 0 || e.a >= n || e.b < 0 || e.b >= n)
      fail(ErrorCode::kIndexOutOfRange,
           "edge (" + std::to_string(e.a) + "," + std::to_string(e.b) +
               ") out of range for n=" + std::to_string(n));
    if (e.a == e.b)
      fail(ErrorCode::kSelfLoop, "self-loop at node " + std::to_string(e.a));
    if (!(e.weight > 0.0))
      fail(ErrorCode::kNonPositiveWeight,
           "edge (" + std::to_string(e.a) + "," + std::to_string(e.b) +
               ") has non-positive weight");
    auto key = std::minmax(e.a, e.b);
    if (!seen.insert(key).second)
      fail(ErrorCode::kDuplicateEdge,
           "duplicate edge (" + std::to_string(e.a) + "," + std::to_string(e.b) + ")");
    g.edges.push_back({key.first, key.second, e.weight});
    g.adjacency(key.first, key.second) = e.weight;
    g.adjacency(key.second, key.first) = e.weight;
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  return g;
}

Matrix laplacian(const Graph& g) {
  std::size_t n = static_cast<std::size_t>(g.n);
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double degree = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double a = g.adjacency(i, j);
      degree += a;
      l(i, j) = -a;
    }
    l(i, i) = degree;
  }
  return l;
}

bool is_connected(const Graph& g) {
  if (g.n <= 1) return true;
  std::vector<char> visited(static_cast<std::size_t>(g.n), 0);
  std::queue<int> frontier;
  frontier.push(0);
  visited[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    int u = frontier.front();
    frontier.pop();
    for (int v = 0; v < g.n; ++v) {
      if (!visited[v] && g.adjacency(u, v) > 0.0) {
        visited[v] = 1;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == g.n;
}

}  // namespace consensus_lab
