#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "ripple/corpus.hpp"
#include "ripple/embedding.hpp"
#include "ripple/errors.hpp"
#include "ripple/util.hpp"
#include "test_util.hpp"

using namespace ripple;

namespace {

Corpus token_corpus(const std::vector<std::vector<std::string>>& method_tokens) {
  Corpus corpus;
  corpus.repo_root = ".";
  for (std::size_t i = 0; i < method_tokens.size(); ++i) {
    MethodRecord m;
    m.method_id = static_cast<int>(i);
    m.file_path = "F" + std::to_string(i) + ".java";
    m.class_name = "C";
    m.method_name = "m" + std::to_string(i);
    m.tokens = method_tokens[i];
    corpus.methods.push_back(std::move(m));
  }
  corpus.rebuild_file_index();
  return corpus;
}

}  // namespace

TEST_SUITE("embedding") {

TEST_CASE("tfidf weights follow tf times log of total over collection frequency") {
  Corpus corpus = token_corpus({{"a", "a", "b"}});
  EmbeddingMatrix m = tfidf_embed(corpus);
  REQUIRE(m.n_rows() == 1);
  REQUIRE(m.dim() == 2);  // sorted vocabulary [a, b]
  std::vector<double> row = m.row_dense(0);
  CHECK(std::abs(row[0] - 2.0 * std::log(3.0 / 2.0)) <= 1e-12);
  CHECK(std::abs(row[1] - 1.0 * std::log(3.0 / 1.0)) <= 1e-12);
}

TEST_CASE("token filling the whole corpus weighs zero") {
  Corpus corpus = token_corpus({{"a", "a", "a"}});
  EmbeddingMatrix m = tfidf_embed(corpus);
  std::vector<double> row = m.row_dense(0);
  REQUIRE(row.size() == 1);
  CHECK(row[0] == 0.0);
}

TEST_CASE("identical methods get identical rows") {
  Corpus corpus = token_corpus({{"get", "name"}, {"get", "name"}, {"other"}});
  EmbeddingMatrix m = tfidf_embed(corpus);
  CHECK(m.row_dense(0) == m.row_dense(1));
}

TEST_CASE("document idf mode uses method counts") {
  Corpus corpus = token_corpus({{"a"}, {"a", "b"}});
  EmbeddingMatrix m = tfidf_embed(corpus, IdfMode::Document);
  // N = 2 methods; df(a) = 2 -> idf 0; df(b) = 1 -> idf ln 2.
  std::vector<double> r0 = m.row_dense(0);
  std::vector<double> r1 = m.row_dense(1);
  CHECK(r0[0] == 0.0);
  CHECK(r0[1] == 0.0);
  CHECK(r1[0] == 0.0);
  CHECK(std::abs(r1[1] - std::log(2.0)) <= 1e-12);
}

TEST_CASE("empty vocabulary is an error") {
  Corpus corpus = token_corpus({{}, {}});
  CHECK_THROWS_AS(tfidf_embed(corpus), ValidationError);
}

TEST_CASE("tfidf is permutation equivariant") {
  std::mt19937_64 rng(42);
  std::vector<std::string> vocab = {"get", "set", "name", "count", "index", "map"};
  std::vector<std::vector<std::string>> methods(8);
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::uniform_int_distribution<int> len(1, 6);
  for (auto& tokens : methods) {
    int n = len(rng);
    for (int i = 0; i < n; ++i) tokens.push_back(vocab[pick(rng)]);
  }
  Corpus original = token_corpus(methods);

  std::vector<std::size_t> perm(methods.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::vector<std::string>> shuffled(methods.size());
  for (std::size_t i = 0; i < perm.size(); ++i) shuffled[i] = methods[perm[i]];
  Corpus permuted = token_corpus(shuffled);

  EmbeddingMatrix a = tfidf_embed(original);
  EmbeddingMatrix b = tfidf_embed(permuted);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    CHECK(b.row_dense(static_cast<int>(i)) == a.row_dense(static_cast<int>(perm[i])));
  }
}

TEST_CASE("cosine matches hand computed values") {
  CHECK(cosine({1, 2, 3}, {1, 2, 3}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cosine({1, 0}, {0, 1}) == 0.0);
  CHECK(cosine({1, 1}, {1, 0}) == 0.7071067811865475);
}

TEST_CASE("cosine of a zero vector is zero by convention") {
  CHECK(cosine({0, 0}, {1, 2}) == 0.0);
  CHECK(cosine({0, 0}, {0, 0}) == 0.0);
}

TEST_CASE("cosine rejects dimension mismatch") {
  CHECK_THROWS_AS(cosine({1, 2}, {1, 2, 3}), ValidationError);
}

TEST_CASE("cosine is symmetric and scale invariant") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> u(5), v(5);
    for (auto& x : u) x = val(rng);
    for (auto& x : v) x = val(rng);
    double c = cosine(u, v);
    CHECK(cosine(v, u) == c);
    std::vector<double> u2 = u;
    for (auto& x : u2) x *= 2.0;  // power of two keeps floats exact
    CHECK(cosine(u2, v) == c);
    CHECK(c >= -1.0 - 1e-12);
    CHECK(c <= 1.0 + 1e-12);
  }
}

TEST_CASE("embedding interchange round trips") {
  testutil::TempDir dir;
  auto path = dir / "emb.jsonl";
  write_text_file(path,
                  "{\"method_id\": 1, \"vector\": [0.5, -1.5, 2.0]}\n"
                  "{\"method_id\": 0, \"vector\": [1.0, 2.0, 3.0]}\n");
  EmbeddingMatrix m = read_embeddings_jsonl(path, 2);
  CHECK(m.n_rows() == 2);
  CHECK(m.dim() == 3);
  CHECK(m.provider() == Provider::External);
  CHECK(m.row_dense(0) == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(m.row_dense(1) == std::vector<double>{0.5, -1.5, 2.0});
}

TEST_CASE("missing method id is rejected by name") {
  testutil::TempDir dir;
  auto path = dir / "emb.jsonl";
  std::string lines;
  for (int id : {0, 1, 2, 4}) {
    lines += "{\"method_id\": " + std::to_string(id) + ", \"vector\": [1.0]}\n";
  }
  write_text_file(path, lines);
  CHECK_THROWS_WITH_AS(read_embeddings_jsonl(path, 5), doctest::Contains("missing method_id 3"),
                       ValidationError);
}

TEST_CASE("duplicate, ragged, and non finite records are rejected") {
  testutil::TempDir dir;
  auto path = dir / "emb.jsonl";

  write_text_file(path,
                  "{\"method_id\": 0, \"vector\": [1.0]}\n"
                  "{\"method_id\": 0, \"vector\": [2.0]}\n");
  CHECK_THROWS_WITH_AS(read_embeddings_jsonl(path, 2), doctest::Contains("duplicate method_id 0"),
                       ValidationError);

  write_text_file(path,
                  "{\"method_id\": 0, \"vector\": [1.0, 2.0]}\n"
                  "{\"method_id\": 1, \"vector\": [1.0]}\n");
  CHECK_THROWS_WITH_AS(read_embeddings_jsonl(path, 2), doctest::Contains("ragged vector length"),
                       ValidationError);

  write_text_file(path, "{\"method_id\": 0, \"vector\": [1.0, NaN]}\n");
  CHECK_THROWS_AS(read_embeddings_jsonl(path, 1), ValidationError);

  write_text_file(path, "{\"method_id\": 0, \"vector\": [1.0, null]}\n");
  CHECK_THROWS_WITH_AS(read_embeddings_jsonl(path, 1), doctest::Contains("non-finite"),
                       ValidationError);
}

TEST_CASE("dense matrix rejects non finite values at construction") {
  EmbeddingMatrix m = EmbeddingMatrix::dense(1, 2, Provider::External);
  CHECK_THROWS_AS(m.set_dense_row(0, {1.0, std::nan("")}), ValidationError);
  CHECK_THROWS_AS(m.set_dense_row(0, {1.0, std::numeric_limits<double>::infinity()}),
                  ValidationError);
}

TEST_CASE("row cosine agrees with dense cosine on sparse rows") {
  Corpus corpus = token_corpus({{"a", "b"}, {"b", "c"}, {"c", "d", "a"}});
  EmbeddingMatrix m = tfidf_embed(corpus);
  for (std::size_t i = 0; i < m.n_rows(); ++i) {
    for (std::size_t j = 0; j < m.n_rows(); ++j) {
      double direct = m.row_cosine(i, j);
      double dense = cosine(m.row_dense(i), m.row_dense(j));
      CHECK(std::abs(direct - dense) <= 1e-12);
    }
  }
}

TEST_CASE("mini repo tfidf has one row per method") {
  Corpus corpus = extract_corpus(testutil::mini_repo());
  EmbeddingMatrix m = tfidf_embed(corpus);
  CHECK(m.n_rows() == static_cast<std::size_t>(corpus.n_methods()));
  CHECK(m.provider() == Provider::Tfidf);
  CHECK(m.dim() == tfidf_vocabulary(corpus).size());
}

}  // TEST_SUITE
