#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "consensus_lab/errors.hpp"
#include "consensus_lab/graph.hpp"
#include "consensus_lab/spectral.hpp"
#include "oracles.hpp"

using namespace consensus_lab;

namespace {

bool fails_with(ErrorCode code, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace

TEST_SUITE_BEGIN("graph");

TEST_CASE("five agent graph matches the known degree sequence") {
  Graph g = oracles::five_agent_graph();
  Matrix l = laplacian(g);
  CHECK(l(0, 0) == 3.0);
  CHECK(l(1, 1) == 3.0);
  CHECK(l(2, 2) == 2.0);
  CHECK(l(3, 3) == 2.0);
  CHECK(l(4, 4) == 4.0);  // node 5 has four neighbors
  CHECK(l(0, 1) == -1.0);
  CHECK(l(0, 2) == 0.0);
  CHECK(is_connected(g));
}

TEST_CASE("K2 laplacian") {
  Matrix l = laplacian(oracles::k2());
  CHECK(l(0, 0) == 1.0);
  CHECK(l(0, 1) == -1.0);
  CHECK(l(1, 0) == -1.0);
  CHECK(l(1, 1) == 1.0);
  CHECK(is_connected(oracles::k2()));
}

TEST_CASE("triangle laplacian") {
  Matrix l = laplacian(oracles::triangle());
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(l(i, i) == 2.0);
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) CHECK(l(i, j) == -1.0);
  }
}

TEST_CASE("construction errors") {
  CHECK(fails_with(ErrorCode::kIndexOutOfRange,
                   [] { build_graph(3, {{0, 3, 1.0}}); }));
  CHECK(fails_with(ErrorCode::kSelfLoop, [] { build_graph(3, {{1, 1, 1.0}}); }));
  CHECK(fails_with(ErrorCode::kNonPositiveWeight,
                   [] { build_graph(3, {{0, 1, 0.0}}); }));
  CHECK(fails_with(ErrorCode::kNonPositiveWeight,
                   [] { build_graph(3, {{0, 1, -2.0}}); }));
  // duplicates are rejected in either orientation
  CHECK(fails_with(ErrorCode::kDuplicateEdge,
                   [] { build_graph(3, {{0, 1, 1.0}, {1, 0, 2.0}}); }));
  CHECK(fails_with(ErrorCode::kInvalidArgument, [] { build_graph(0, {}); }));
}

TEST_CASE("two components are not connected") {
  Graph g = build_graph(4, {{0, 1, 1.0}, {2, 3, 1.0}});
  CHECK_FALSE(is_connected(g));
}

TEST_CASE("single agent graph is trivially connected") {
  Graph g = build_graph(1, {});
  CHECK(is_connected(g));
  CHECK(laplacian(g)(0, 0) == 0.0);
}

TEST_CASE("laplacian rows sum to zero on random graphs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + static_cast<int>(rng() % 12);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng() % 3 == 0)
          edges.push_back({i, j, 0.1 + static_cast<double>(rng() % 100) / 25.0});
    Graph g = build_graph(n, edges);
    Matrix l = laplacian(g);
    for (std::size_t i = 0; i < l.rows(); ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < l.cols(); ++j) row += l(i, j);
      CHECK(std::abs(row) < 1e-12);
      for (std::size_t j = 0; j < l.cols(); ++j) CHECK(l(i, j) == l(j, i));
    }
  }
}

TEST_CASE("edge order does not change the laplacian") {
  std::vector<Edge> edges = {{0, 1, 1.5}, {1, 2, 0.25}, {0, 3, 2.0}, {2, 3, 1.0}};
  Matrix base = laplacian(build_graph(4, edges));
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(edges.begin(), edges.end(), rng);
    Matrix l = laplacian(build_graph(4, edges));
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) CHECK(l(i, j) == base(i, j));
  }
}

TEST_CASE("connectivity agrees with the Fiedler value") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 3 + static_cast<int>(rng() % 8);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng() % 4 == 0) edges.push_back({i, j, 1.0});
    Graph g = build_graph(n, edges);
    Spectrum spectrum = eigendecompose(laplacian(g));
    CHECK(is_connected(g) == (spectrum.lambda2() > 1e-9));
  }
}

TEST_SUITE_END();
