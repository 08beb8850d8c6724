#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "ripple/corpus.hpp"
#include "ripple/embedding.hpp"
#include "ripple/errors.hpp"
#include "ripple/propagation.hpp"
#include "ripple/ranking.hpp"

using namespace ripple;

namespace {

Corpus file_layout(const std::vector<std::string>& files) {
  Corpus corpus;
  corpus.repo_root = ".";
  for (std::size_t i = 0; i < files.size(); ++i) {
    MethodRecord m;
    m.method_id = static_cast<int>(i);
    m.file_path = files[i];
    m.class_name = "C";
    m.method_name = "m" + std::to_string(i);
    corpus.methods.push_back(std::move(m));
  }
  corpus.rebuild_file_index();
  return corpus;
}

EmbeddingMatrix matrix_of(const std::vector<std::vector<double>>& rows) {
  EmbeddingMatrix m =
      EmbeddingMatrix::dense(rows.size(), rows.empty() ? 0 : rows[0].size(), Provider::External);
  for (std::size_t i = 0; i < rows.size(); ++i) m.set_dense_row(i, rows[i]);
  return m;
}

std::vector<int> ids_of(const RankedImpactList& r) {
  std::vector<int> ids;
  for (auto [id, score] : r.entries) ids.push_back(id);
  return ids;
}

}  // namespace

TEST_SUITE("ranking") {

TEST_CASE("setting names round trip") {
  CHECK(setting_name(Setting::Whole) == "whole");
  CHECK(setting_name(Setting::Inner) == "inner");
  CHECK(setting_name(Setting::Outer) == "outer");
  CHECK(parse_setting("outer") == Setting::Outer);
  CHECK_THROWS_AS(parse_setting("sideways"), ValidationError);
}

TEST_CASE("scope covers whole, inner, and outer definitions") {
  Corpus corpus = file_layout({"a.java", "a.java", "f.java", "f.java", "z.java"});
  CHECK(scope_corpus(2, corpus, Setting::Whole) == std::vector<int>{0, 1, 3, 4});
  CHECK(scope_corpus(2, corpus, Setting::Inner) == std::vector<int>{3});
  CHECK(scope_corpus(2, corpus, Setting::Outer) == std::vector<int>{0, 1, 4});
  CHECK_THROWS_AS(scope_corpus(9, corpus, Setting::Whole), ValidationError);
}

TEST_CASE("rank orders by cosine against the query row") {
  std::vector<std::vector<double>> rows(8, std::vector<double>{0.0, 0.0});
  rows[0] = {1.0, 0.0};  // query
  rows[7] = {1.0, 0.0};
  rows[3] = {0.0, 1.0};
  EmbeddingMatrix m = matrix_of(rows);
  RankedImpactList r = rank(0, m, {7, 3}, Setting::Whole);
  REQUIRE(r.entries.size() == 2);
  CHECK(r.entries[0].first == 7);
  CHECK(r.entries[0].second == 1.0);
  CHECK(r.entries[1].first == 3);
  CHECK(r.entries[1].second == 0.0);
}

TEST_CASE("ties break by ascending method id") {
  std::vector<std::vector<double>> rows(10, std::vector<double>{0.0, 0.0});
  rows[0] = {1.0, 0.0};
  rows[9] = {1.0, 1.0};
  rows[4] = {1.0, 1.0};
  rows[6] = {1.0, 1.0};
  EmbeddingMatrix m = matrix_of(rows);
  RankedImpactList r = rank(0, m, {9, 4, 6}, Setting::Whole);
  CHECK(ids_of(r) == std::vector<int>{4, 6, 9});
  CHECK(r.entries[0].second == r.entries[1].second);
  CHECK(r.entries[1].second == r.entries[2].second);
}

TEST_CASE("empty scope gives an empty but legal list") {
  EmbeddingMatrix m = matrix_of({{1.0}, {2.0}});
  RankedImpactList r = rank(0, m, {}, Setting::Inner);
  CHECK(r.entries.empty());
  CHECK(r.query_id == 0);
}

TEST_CASE("query never appears even when the scope includes it") {
  EmbeddingMatrix m = matrix_of({{1.0, 0.0}, {0.5, 0.5}, {0.0, 1.0}});
  RankedImpactList r = rank(1, m, {0, 1, 2}, Setting::Whole);
  CHECK(ids_of(r) == std::vector<int>{0, 2});
}

TEST_CASE("scores are non increasing with ascending ids on ties") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 5 + static_cast<int>(rng() % 20);
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(n),
                                          std::vector<double>(6));
    for (auto& row : rows) {
      for (auto& x : row) x = val(rng);
    }
    EmbeddingMatrix m = matrix_of(rows);
    std::vector<int> scope;
    for (int i = 1; i < n; ++i) scope.push_back(i);
    RankedImpactList r = rank(0, m, scope, Setting::Whole);
    REQUIRE(r.entries.size() == scope.size());
    for (std::size_t i = 1; i < r.entries.size(); ++i) {
      bool ordered = r.entries[i - 1].second > r.entries[i].second ||
                     (r.entries[i - 1].second == r.entries[i].second &&
                      r.entries[i - 1].first < r.entries[i].first);
      CHECK(ordered);
    }
  }
}

TEST_CASE("scaling the query row by a power of two preserves the ranking exactly") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::vector<std::vector<double>> rows(12, std::vector<double>(8));
  for (auto& row : rows) {
    for (auto& x : row) x = val(rng);
  }
  EmbeddingMatrix m = matrix_of(rows);
  std::vector<int> scope;
  for (int i = 1; i < 12; ++i) scope.push_back(i);
  RankedImpactList before = rank(0, m, scope, Setting::Whole);

  auto scaled_rows = rows;
  for (auto& x : scaled_rows[0]) x *= 4.0;
  EmbeddingMatrix scaled = matrix_of(scaled_rows);
  RankedImpactList after = rank(0, scaled, scope, Setting::Whole);

  REQUIRE(before.entries.size() == after.entries.size());
  for (std::size_t i = 0; i < before.entries.size(); ++i) {
    CHECK(before.entries[i].first == after.entries[i].first);
    CHECK(before.entries[i].second == after.entries[i].second);
  }
}

TEST_CASE("weighting graph lifts order one neighbors before sorting") {
  // Query 0 with neighbor 1: base cosines put 2 first (0.447 vs 0.0);
  // halving the neighbor distance lifts 1 to 0.5 and flips the order.
  EmbeddingMatrix m = matrix_of({{1.0, 0.0}, {0.0, 1.0}, {1.0, 2.0}});
  UndirectedGraph g = UndirectedGraph::from_edges(3, {{0, 1}});
  std::vector<int> scope = {1, 2};
  RankedImpactList plain = rank(0, m, scope, Setting::Whole);
  CHECK(ids_of(plain) == std::vector<int>{2, 1});
  RankedImpactList weighted = rank(0, m, scope, Setting::Whole, &g);
  CHECK(ids_of(weighted) == std::vector<int>{1, 2});
  CHECK(weighted.entries[0].second == 0.5);  // 1 - 0.5 * (1 - 0)
}

TEST_CASE("propagation lifts a contextually linked ground truth past a lexical decoy") {
  // Four methods: query 0; method 1 identical to the query; ground truth 2
  // orthogonal to the query but calling 1; decoy 3 lexically similar to the
  // query. One call edge (1, 2).
  EmbeddingMatrix m = matrix_of({{1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 3.0}});
  UndirectedGraph g = UndirectedGraph::from_edges(4, {{1, 2}});
  std::vector<int> scope = {1, 2, 3};

  RankedImpactList before = rank(0, m, scope, Setting::Whole);
  CHECK(ids_of(before) == std::vector<int>{1, 3, 2});
  CHECK(before.entries[0].second == 1.0);
  CHECK(before.entries[1].second == 0.31622776601683794);  // 1/sqrt(10)
  CHECK(before.entries[2].second == 0.0);

  PropagationConfig config;
  config.w = 0.5;
  config.max_order = 1;
  EmbeddingMatrix prop = propagate(m, g, config);
  RankedImpactList after = rank(0, prop, scope, Setting::Whole);
  CHECK(ids_of(after) == std::vector<int>{1, 2, 3});
  CHECK(after.entries[0].second == 0.8944271909999159);  // 1/sqrt(1.25)
  CHECK(after.entries[1].second == 0.4472135954999579);  // 0.5/sqrt(1.25)
  CHECK(after.entries[2].second == 0.31622776601683794);

  // Ground truth 2: score strictly up, rank strictly better.
  CHECK(after.entries[1].second > before.entries[2].second);
}

TEST_CASE("rank rejects an out of range query") {
  EmbeddingMatrix m = matrix_of({{1.0}, {2.0}});
  CHECK_THROWS_AS(rank(5, m, {0}, Setting::Whole), ValidationError);
}

}  // TEST_SUITE
