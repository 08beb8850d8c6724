#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <utility>
#include <vector>

#include <doctest.h>

#include "ripple/embedding.hpp"
#include "ripple/errors.hpp"
#include "ripple/propagation.hpp"
#include "oracles.hpp"

using namespace ripple;

namespace {

EmbeddingMatrix dense_from(const oracle::Matrix& rows) {
  EmbeddingMatrix m =
      EmbeddingMatrix::dense(rows.size(), rows.empty() ? 0 : rows[0].size(), Provider::External);
  for (std::size_t i = 0; i < rows.size(); ++i) m.set_dense_row(i, rows[i]);
  return m;
}

double max_abs_diff(const EmbeddingMatrix& got, const oracle::Matrix& want) {
  double worst = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    std::vector<double> row = got.row_dense(i);
    REQUIRE(row.size() == want[i].size());
    for (std::size_t j = 0; j < row.size(); ++j) {
      worst = std::max(worst, std::abs(row[j] - want[i][j]));
    }
  }
  return worst;
}

}  // namespace

TEST_SUITE("propagation") {

TEST_CASE("undirected graph drops self loops and duplicate edges") {
  UndirectedGraph g = UndirectedGraph::from_edges(3, {{0, 1}, {1, 0}, {2, 2}, {0, 1}});
  CHECK(g.adj[0] == std::vector<int>{1});
  CHECK(g.adj[1] == std::vector<int>{0});
  CHECK(g.adj[2].empty());
  CHECK_THROWS_AS(UndirectedGraph::from_edges(2, {{0, 5}}), ValidationError);
}

TEST_CASE("path graph order one normalizes by degree") {
  UndirectedGraph g = UndirectedGraph::from_edges(3, {{0, 1}, {1, 2}});
  NormalizedAdjacency s1 = order_adjacency(g, 1);
  // Degrees 1, 2, 1: entry (0,1) = 1/sqrt(1*2).
  REQUIRE(s1.rows[0].size() == 1);
  CHECK(s1.rows[0][0].first == 1);
  CHECK(s1.rows[0][0].second == doctest::Approx(0.7071067811865475).epsilon(1e-15));
  REQUIRE(s1.rows[1].size() == 2);
}

TEST_CASE("path graph order two links the endpoints with weight one") {
  UndirectedGraph g = UndirectedGraph::from_edges(3, {{0, 1}, {1, 2}});
  NormalizedAdjacency s2 = order_adjacency(g, 2);
  REQUIRE(s2.rows[0].size() == 1);
  CHECK(s2.rows[0][0].first == 2);
  CHECK(s2.rows[0][0].second == 1.0);
  CHECK(s2.rows[1].empty());  // middle node has no distance-2 peer
}

TEST_CASE("edgeless graph has an all zero adjacency at every order") {
  UndirectedGraph g = UndirectedGraph::from_edges(4, {});
  for (int order = 1; order <= 3; ++order) {
    NormalizedAdjacency s = order_adjacency(g, order);
    for (const auto& row : s.rows) CHECK(row.empty());
  }
}

TEST_CASE("order adjacency rejects orders outside one to three") {
  UndirectedGraph g = UndirectedGraph::from_edges(2, {{0, 1}});
  CHECK_THROWS_AS(order_adjacency(g, 0), ValidationError);
  CHECK_THROWS_AS(order_adjacency(g, 4), ValidationError);
}

TEST_CASE("normalized adjacency is symmetric with zero diagonal and entries in unit range") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + static_cast<int>(rng() % 30);
    auto edges = oracle::random_graph(rng, n, 0.2);
    UndirectedGraph g = UndirectedGraph::from_edges(n, edges);
    for (int order = 1; order <= 3; ++order) {
      NormalizedAdjacency s = order_adjacency(g, order);
      for (int u = 0; u < n; ++u) {
        for (auto [v, value] : s.rows[static_cast<std::size_t>(u)]) {
          CHECK(v != u);
          CHECK(value > 0.0);
          CHECK(value <= 1.0 + 1e-15);
          const auto& back = s.rows[static_cast<std::size_t>(v)];
          auto it = std::find_if(back.begin(), back.end(),
                                 [u](const std::pair<int, double>& e) { return e.first == u; });
          REQUIRE(it != back.end());
          CHECK(it->second == value);
        }
      }
    }
  }
}

TEST_CASE("two connected nodes mix half of each other") {
  oracle::Matrix rows = {{2.0, -4.0, 8.0}, {1.0, 3.0, -5.0}};
  EmbeddingMatrix m = dense_from(rows);
  UndirectedGraph g = UndirectedGraph::from_edges(2, {{0, 1}});
  PropagationConfig config;  // w = 0.5, max_order = 2
  EmbeddingMatrix out = propagate(m, g, config);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(out.row_dense(0)[j] == rows[0][j] + 0.5 * rows[1][j]);
    CHECK(out.row_dense(1)[j] == rows[1][j] + 0.5 * rows[0][j]);
  }
}

TEST_CASE("isolated node keeps its exact row") {
  oracle::Matrix rows = {{1.0, 2.0}, {3.0, 4.0}, {0.25, -0.75}};
  EmbeddingMatrix m = dense_from(rows);
  UndirectedGraph g = UndirectedGraph::from_edges(3, {{0, 1}});
  PropagationConfig config;
  EmbeddingMatrix out = propagate(m, g, config);
  CHECK(out.row_dense(2) == rows[2]);
}

TEST_CASE("w zero is the identity") {
  std::mt19937_64 rng(21);
  auto rows = oracle::random_matrix(rng, 12, 5);
  auto edges = oracle::random_graph(rng, 12, 0.3);
  EmbeddingMatrix m = dense_from(rows);
  UndirectedGraph g = UndirectedGraph::from_edges(12, edges);
  PropagationConfig config;
  config.w = 0.0;
  config.max_order = 3;
  EmbeddingMatrix out = propagate(m, g, config);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(out.row_dense(i) == rows[i]);
}

TEST_CASE("propagation is linear in the matrix") {
  std::mt19937_64 rng(22);
  int n = 15;
  auto edges = oracle::random_graph(rng, n, 0.25);
  UndirectedGraph g = UndirectedGraph::from_edges(n, edges);
  auto a = oracle::random_matrix(rng, n, 4);
  auto b = oracle::random_matrix(rng, n, 4);
  double alpha = 0.7, beta = -1.3;
  oracle::Matrix combo(static_cast<std::size_t>(n), std::vector<double>(4));
  for (std::size_t i = 0; i < combo.size(); ++i) {
    for (std::size_t j = 0; j < 4; ++j) combo[i][j] = alpha * a[i][j] + beta * b[i][j];
  }
  PropagationConfig config;
  config.max_order = 2;
  EmbeddingMatrix pa = propagate(dense_from(a), g, config);
  EmbeddingMatrix pb = propagate(dense_from(b), g, config);
  EmbeddingMatrix pc = propagate(dense_from(combo), g, config);
  for (int i = 0; i < n; ++i) {
    auto ra = pa.row_dense(static_cast<std::size_t>(i));
    auto rb = pb.row_dense(static_cast<std::size_t>(i));
    auto rc = pc.row_dense(static_cast<std::size_t>(i));
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(std::abs(rc[j] - (alpha * ra[j] + beta * rb[j])) <= 1e-9);
    }
  }
}

TEST_CASE("propagation commutes with node relabeling") {
  std::mt19937_64 rng(23);
  int n = 12;
  auto edges = oracle::random_graph(rng, n, 0.3);
  auto rows = oracle::random_matrix(rng, n, 3);
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::shuffle(perm.begin(), perm.end(), rng);

  oracle::EdgeList mapped_edges;
  for (auto [u, v] : edges) {
    mapped_edges.emplace_back(perm[static_cast<std::size_t>(u)],
                              perm[static_cast<std::size_t>(v)]);
  }
  oracle::Matrix mapped_rows(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    mapped_rows[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
        rows[static_cast<std::size_t>(i)];
  }

  PropagationConfig config;
  config.max_order = 3;
  EmbeddingMatrix direct = propagate(dense_from(rows),
                                     UndirectedGraph::from_edges(n, edges), config);
  EmbeddingMatrix mapped = propagate(dense_from(mapped_rows),
                                     UndirectedGraph::from_edges(n, mapped_edges), config);
  for (int i = 0; i < n; ++i) {
    auto want = direct.row_dense(static_cast<std::size_t>(i));
    auto got = mapped.row_dense(static_cast<std::size_t>(perm[static_cast<std::size_t>(i)]));
    for (std::size_t j = 0; j < want.size(); ++j) CHECK(std::abs(got[j] - want[j]) <= 1e-12);
  }
}

TEST_CASE("sparse propagation matches the dense oracle") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 2 + static_cast<int>(rng() % 49);
    int dim = 1 + static_cast<int>(rng() % 16);
    double density = (rng() % 1000) / 1000.0 * 0.3;
    auto edges = oracle::random_graph(rng, n, density);
    auto rows = oracle::random_matrix(rng, n, dim);
    PropagationConfig config;
    config.w = (rng() % 1000) / 1000.0;
    config.max_order = 1 + static_cast<int>(rng() % 3);
    UndirectedGraph g = UndirectedGraph::from_edges(n, edges);
    EmbeddingMatrix out = propagate(dense_from(rows), g, config);
    oracle::Matrix want = oracle::propagate(rows, n, edges, config.w, config.max_order);
    CHECK(max_abs_diff(out, want) <= 1e-9);
  }
}

TEST_CASE("within mode matches the cumulative closure oracle") {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 2 + static_cast<int>(rng() % 30);
    auto edges = oracle::random_graph(rng, n, 0.15);
    auto rows = oracle::random_matrix(rng, n, 6);
    PropagationConfig config;
    config.max_order = 3;
    config.neighbor_mode = NeighborMode::Within;
    UndirectedGraph g = UndirectedGraph::from_edges(n, edges);
    EmbeddingMatrix out = propagate(dense_from(rows), g, config, 4);
    oracle::Matrix want = oracle::propagate(rows, n, edges, 0.5, 3, /*within=*/true);
    CHECK(max_abs_diff(out, want) <= 1e-9);
  }
}

TEST_CASE("propagation of sparse storage agrees with dense storage") {
  Corpus corpus;
  corpus.repo_root = ".";
  for (int i = 0; i < 5; ++i) {
    MethodRecord m;
    m.method_id = i;
    m.file_path = "F.java";
    m.class_name = "C";
    m.method_name = "m" + std::to_string(i);
    m.tokens = {"tok" + std::to_string(i), "shared"};
    corpus.methods.push_back(std::move(m));
  }
  corpus.rebuild_file_index();
  EmbeddingMatrix sparse = tfidf_embed(corpus);
  REQUIRE(sparse.is_sparse());
  EmbeddingMatrix dense = EmbeddingMatrix::dense(sparse.n_rows(), sparse.dim(),
                                                 sparse.provider());
  for (std::size_t i = 0; i < sparse.n_rows(); ++i) dense.set_dense_row(i, sparse.row_dense(i));

  UndirectedGraph g = UndirectedGraph::from_edges(5, {{0, 1}, {1, 2}, {3, 4}});
  PropagationConfig config;
  config.max_order = 2;
  EmbeddingMatrix from_sparse = propagate(sparse, g, config);
  EmbeddingMatrix from_dense = propagate(dense, g, config);
  CHECK(from_sparse.is_sparse());
  for (std::size_t i = 0; i < sparse.n_rows(); ++i) {
    auto a = from_sparse.row_dense(i);
    auto b = from_dense.row_dense(i);
    REQUIRE(a.size() == b.size());
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(std::abs(a[j] - b[j]) <= 1e-12);
  }
}

TEST_CASE("propagation is deterministic across thread counts") {
  std::mt19937_64 rng(26);
  int n = 40;
  auto edges = oracle::random_graph(rng, n, 0.2);
  auto rows = oracle::random_matrix(rng, n, 8);
  UndirectedGraph g = UndirectedGraph::from_edges(n, edges);
  PropagationConfig config;
  config.max_order = 3;
  EmbeddingMatrix one = propagate(dense_from(rows), g, config, 1);
  EmbeddingMatrix many = propagate(dense_from(rows), g, config, 8);
  for (std::size_t i = 0; i < one.n_rows(); ++i) CHECK(one.row_dense(i) == many.row_dense(i));
}

TEST_CASE("propagate rejects mismatched row count and bad config") {
  EmbeddingMatrix m = EmbeddingMatrix::dense(2, 2, Provider::External);
  m.set_dense_row(0, {1.0, 0.0});
  m.set_dense_row(1, {0.0, 1.0});
  UndirectedGraph g = UndirectedGraph::from_edges(3, {{0, 1}});
  PropagationConfig config;
  CHECK_THROWS_AS(propagate(m, g, config), ValidationError);

  UndirectedGraph g2 = UndirectedGraph::from_edges(2, {{0, 1}});
  config.max_order = 0;
  CHECK_THROWS_AS(propagate(m, g2, config), ValidationError);
  config.max_order = 2;
  config.w = -0.5;
  CHECK_THROWS_AS(propagate(m, g2, config), ValidationError);
}

TEST_CASE("similarity weighting halves the distance of order one neighbors") {
  UndirectedGraph g = UndirectedGraph::from_edges(4, {{0, 1}, {1, 2}});
  std::vector<double> base = {0.0, 0.4, 0.9, 0.4};
  std::vector<double> adjusted = similarity_weighting(0, g, base);
  CHECK(adjusted[1] == 0.7);   // neighbor: 1 - 0.5 * (1 - 0.4)
  CHECK(adjusted[2] == 0.9);   // distance 2: untouched
  CHECK(adjusted[3] == 0.4);   // disconnected: untouched
  CHECK(adjusted[0] == 0.0);   // query slot passes through

  std::vector<double> ones = {0.0, 1.0, 0.5, 0.5};
  CHECK(similarity_weighting(0, g, ones)[1] == 1.0);  // zero distance fixed point
}

TEST_CASE("similarity weighting never decreases a neighbor and stays in range") {
  std::mt19937_64 rng(27);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 3 + static_cast<int>(rng() % 20);
    auto edges = oracle::random_graph(rng, n, 0.3);
    UndirectedGraph g = UndirectedGraph::from_edges(n, edges);
    int query = static_cast<int>(rng() % static_cast<unsigned long>(n));
    std::vector<double> base(static_cast<std::size_t>(n));
    for (auto& x : base) x = val(rng);
    std::vector<double> adjusted = similarity_weighting(query, g, base);
    std::vector<bool> is_neighbor(static_cast<std::size_t>(n), false);
    for (int v : g.adj[static_cast<std::size_t>(query)]) is_neighbor[static_cast<std::size_t>(v)] = true;
    for (int j = 0; j < n; ++j) {
      auto idx = static_cast<std::size_t>(j);
      if (is_neighbor[idx]) {
        CHECK(adjusted[idx] >= base[idx]);
        CHECK(adjusted[idx] <= 1.0);
      } else {
        CHECK(adjusted[idx] == base[idx]);
      }
    }
  }
}

}  // TEST_SUITE
