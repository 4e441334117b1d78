#pragma once

#include <cstddef>
#include <tuple>
#include <vector>

#include "consensus_lab/linalg.hpp"

namespace consensus_lab {

/// One undirected weighted edge, 0-based endpoints, weight > 0.
struct Edge {
  int a;
  int b;
  double weight;
};

/// Immutable weighted undirected communication graph. Construct through
/// build_graph(); after that it is safe to share read-only across threads.
struct Graph {
  int n = 0;
  std::vector<Edge> edges;      // canonical a<b, sorted
  Matrix adjacency;             // symmetric, zero diagonal

  double weight(int i, int j) const { return adjacency(i, j); }
};

/// Validates and symmetrizes an edge list given with 0-based endpoints.
/// Rejects self-loops, non-positive weights, out-of-range indices and
/// duplicate unordered pairs (duplicates are config typos, not sums).
/// n=1 is allowed as the trivially-connected single-agent graph.
Graph build_graph(int n, const std::vector<Edge>& edges);

/// L = Diag(A*1) - A. Row sums are exactly zero by construction.
Matrix laplacian(const Graph& g);

/// Breadth-first reachability of all n nodes from node 0.
bool is_connected(const Graph& g);

}  // namespace consensus_lab
