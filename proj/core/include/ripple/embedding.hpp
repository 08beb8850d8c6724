#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ripple/corpus.hpp"

namespace ripple {

enum class Provider { Tfidf, External };
enum class IdfMode { Collection, Document };

/// N x F method embedding matrix; row i belongs to method_id i. TF-IDF
/// rows are kept sparse (vocabulary columns), imported vectors dense.
/// Finite values only; NaN or infinity is rejected at construction.
class EmbeddingMatrix {
public:
  static EmbeddingMatrix dense(std::size_t n_rows, std::size_t dim, Provider provider);
  static EmbeddingMatrix sparse(std::size_t n_rows, std::size_t dim, Provider provider);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t dim() const { return dim_; }
  Provider provider() const { return provider_; }
  bool is_sparse() const { return sparse_; }

  void set_dense_row(std::size_t row, const std::vector<double>& values);
  void set_sparse_row(std::size_t row, std::vector<std::pair<std::size_t, double>> entries);

  const std::vector<double>& dense_values() const { return values_; }
  const std::vector<std::pair<std::size_t, double>>& sparse_row(std::size_t row) const {
    return rows_[row];
  }

  std::vector<double> row_dense(std::size_t row) const;

  /// Cosine similarity of two rows; 0 when either row has zero norm.
  double row_cosine(std::size_t a, std::size_t b) const;

private:
  std::size_t n_rows_ = 0;
  std::size_t dim_ = 0;
  Provider provider_ = Provider::Tfidf;
  bool sparse_ = false;
  std::vector<double> values_;                                   // dense, row-major
  std::vector<std::vector<std::pair<std::size_t, double>>> rows_;  // sparse, sorted by col
  std::vector<double> norms_;
};

/// weight(t, m) = tf(t, m) * ln(T / cf(t)) with T the corpus token count
/// and cf the collection count of t; Document mode uses ln(N / df(t)).
/// Columns follow the sorted vocabulary.
EmbeddingMatrix tfidf_embed(const Corpus& corpus, IdfMode mode = IdfMode::Collection);

/// Sorted vocabulary of a corpus (distinct preprocessed tokens).
std::vector<std::string> tfidf_vocabulary(const Corpus& corpus);

/// Reads JSON Lines records {"method_id": int, "vector": [real...]}.
/// Every id in [0, n_rows) must appear exactly once with a uniform,
/// finite vector.
EmbeddingMatrix read_embeddings_jsonl(const std::string& path, std::size_t n_rows);

/// read_embeddings_jsonl sized by the corpus method count.
EmbeddingMatrix import_embeddings(const std::string& path, const Corpus& corpus);

/// u.v / (|u||v|); 0 when either norm is 0; throws on dim mismatch.
double cosine(const std::vector<double>& u, const std::vector<double>& v);

}  // namespace ripple
