// Microbenchmarks for the hot paths: graph normalization, propagation,
// TF-IDF construction, extraction, and task scoring. Inputs are synthetic
// and seeded so runs are comparable.

#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ripple/benchmark.hpp"
#include "ripple/callgraph.hpp"
#include "ripple/corpus.hpp"
#include "ripple/embedding.hpp"
#include "ripple/propagation.hpp"
#include "ripple/ranking.hpp"
#include "ripple/util.hpp"

using namespace ripple;

namespace {

std::vector<std::pair<int, int>> synthetic_edges(int n, int avg_degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<int, int>> edges;
  auto m = static_cast<std::size_t>(n) * static_cast<std::size_t>(avg_degree) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    int u = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    int v = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    if (u != v) edges.emplace_back(u, v);
  }
  return edges;
}

EmbeddingMatrix synthetic_matrix(int n, int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  EmbeddingMatrix m = EmbeddingMatrix::dense(static_cast<std::size_t>(n),
                                             static_cast<std::size_t>(dim), Provider::External);
  std::vector<double> row(static_cast<std::size_t>(dim));
  for (int i = 0; i < n; ++i) {
    for (auto& x : row) x = val(rng);
    m.set_dense_row(static_cast<std::size_t>(i), row);
  }
  return m;
}

Corpus synthetic_corpus(int n_methods, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const char* words[] = {"get", "set", "index", "count", "node",  "map",
                         "list", "parse", "token", "write", "close", "flush"};
  Corpus corpus;
  corpus.repo_root = ".";
  for (int i = 0; i < n_methods; ++i) {
    MethodRecord m;
    m.method_id = i;
    m.file_path = "F" + std::to_string(i % 50) + ".java";
    m.class_name = "C" + std::to_string(i % 50);
    m.method_name = "m" + std::to_string(i);
    std::size_t len = 5 + rng() % 60;
    for (std::size_t t = 0; t < len; ++t) m.tokens.push_back(words[rng() % 12]);
    corpus.methods.push_back(std::move(m));
  }
  corpus.rebuild_file_index();
  return corpus;
}

// A small deterministic Java repository to time extraction end to end.
class ExtractFixture : public benchmark::Fixture {
public:
  void SetUp(const benchmark::State&) override {
    namespace fs = std::filesystem;
    root = fs::temp_directory_path() / "ripple_bench_repo";
    if (fs::exists(root)) return;
    fs::create_directories(root / "src/main/java/com/bench");
    for (int f = 0; f < 40; ++f) {
      std::string body = "package com.bench;\n\npublic class Gen" + std::to_string(f) + " {\n";
      for (int m = 0; m < 12; ++m) {
        body += "  int method" + std::to_string(m) + "(int value) {\n";
        body += "    int result = value * " + std::to_string(m + 1) + ";\n";
        body += "    return helper" + std::to_string((m + 1) % 12) + "(result);\n  }\n";
        body += "  int helper" + std::to_string(m) + "(int v) { return v + 1; }\n";
      }
      body += "}\n";
      write_text_file(root / ("src/main/java/com/bench/Gen" + std::to_string(f) + ".java"),
                      body);
    }
  }
  std::filesystem::path root;
};

}  // namespace

static void BM_OrderAdjacency(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  UndirectedGraph g = UndirectedGraph::from_edges(n, synthetic_edges(n, 6, 7));
  for (auto _ : state) {
    benchmark::DoNotOptimize(order_adjacency(g, 2));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_OrderAdjacency)->Arg(500)->Arg(2000)->Arg(8000)->Complexity();

static void BM_Propagate(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  int dim = static_cast<int>(state.range(1));
  UndirectedGraph g = UndirectedGraph::from_edges(n, synthetic_edges(n, 6, 11));
  EmbeddingMatrix m = synthetic_matrix(n, dim, 13);
  PropagationConfig config;
  config.max_order = 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate(m, g, config));
  }
}
BENCHMARK(BM_Propagate)->Args({1000, 64})->Args({4000, 64})->Args({4000, 256});

static void BM_TfidfEmbed(benchmark::State& state) {
  Corpus corpus = synthetic_corpus(static_cast<int>(state.range(0)), 17);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tfidf_embed(corpus));
  }
}
BENCHMARK(BM_TfidfEmbed)->Arg(1000)->Arg(5000);

BENCHMARK_DEFINE_F(ExtractFixture, BM_ExtractCorpus)(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_corpus(root));
  }
}
BENCHMARK_REGISTER_F(ExtractFixture, BM_ExtractCorpus);

static void BM_BuildCallGraph(benchmark::State& state) {
  namespace fs = std::filesystem;
  auto root = fs::temp_directory_path() / "ripple_bench_repo";
  if (!fs::exists(root)) {
    state.SkipWithError("extract fixture missing");
    return;
  }
  Corpus corpus = extract_corpus(root);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_call_graph(corpus));
  }
}
BENCHMARK(BM_BuildCallGraph);

static void BM_ScoreTask(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  ImpactTask task;
  task.task_id = "bench";
  task.commit_id = "c";
  task.query_id = 0;
  for (int i = 1; i <= n / 10; ++i) task.ground_truth.push_back(i * 7 % n + 1);
  std::sort(task.ground_truth.begin(), task.ground_truth.end());
  task.ground_truth.erase(std::unique(task.ground_truth.begin(), task.ground_truth.end()),
                          task.ground_truth.end());
  RankedImpactList ranking;
  ranking.query_id = 0;
  for (int i = 1; i <= n; ++i) ranking.entries.emplace_back(i, 1.0 - i * 1e-4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(score_task(task, ranking, 10));
  }
}
BENCHMARK(BM_ScoreTask)->Arg(1000)->Arg(10000);

BENCHMARK_MAIN();
