#include "ripple/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "ripple/errors.hpp"

namespace ripple {

namespace {

double sparse_norm(const std::vector<std::pair<std::size_t, double>>& row) {
  double s = 0.0;
  for (const auto& [col, v] : row) {
    (void)col;
    s += v * v;
  }
  return std::sqrt(s);
}

}  // namespace

EmbeddingMatrix EmbeddingMatrix::dense(std::size_t n_rows, std::size_t dim,
                                       Provider provider) {
  EmbeddingMatrix m;
  m.n_rows_ = n_rows;
  m.dim_ = dim;
  m.provider_ = provider;
  m.sparse_ = false;
  m.values_.assign(n_rows * dim, 0.0);
  m.norms_.assign(n_rows, 0.0);
  return m;
}

EmbeddingMatrix EmbeddingMatrix::sparse(std::size_t n_rows, std::size_t dim,
                                        Provider provider) {
  EmbeddingMatrix m;
  m.n_rows_ = n_rows;
  m.dim_ = dim;
  m.provider_ = provider;
  m.sparse_ = true;
  m.rows_.resize(n_rows);
  m.norms_.assign(n_rows, 0.0);
  return m;
}

void EmbeddingMatrix::set_dense_row(std::size_t row, const std::vector<double>& values) {
  if (sparse_) throw Error("set_dense_row on a sparse matrix");
  if (values.size() != dim_) throw ValidationError("row dimension mismatch");
  double s = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError("non-finite embedding value");
    s += v * v;
  }
  std::copy(values.begin(), values.end(), values_.begin() + static_cast<std::ptrdiff_t>(row * dim_));
  norms_[row] = std::sqrt(s);
}

void EmbeddingMatrix::set_sparse_row(std::size_t row,
                                     std::vector<std::pair<std::size_t, double>> entries) {
  if (!sparse_) throw Error("set_sparse_row on a dense matrix");
  std::sort(entries.begin(), entries.end());
  for (const auto& [col, v] : entries) {
    if (col >= dim_) throw ValidationError("column out of range");
    if (!std::isfinite(v)) throw ValidationError("non-finite embedding value");
  }
  norms_[row] = sparse_norm(entries);
  rows_[row] = std::move(entries);
}

std::vector<double> EmbeddingMatrix::row_dense(std::size_t row) const {
  if (!sparse_) {
    auto begin = values_.begin() + static_cast<std::ptrdiff_t>(row * dim_);
    return std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(dim_));
  }
  std::vector<double> out(dim_, 0.0);
  for (const auto& [col, v] : rows_[row]) out[col] = v;
  return out;
}

double EmbeddingMatrix::row_cosine(std::size_t a, std::size_t b) const {
  double na = norms_[a], nb = norms_[b];
  if (na == 0.0 || nb == 0.0) return 0.0;
  double dot = 0.0;
  if (sparse_) {
    const auto& ra = rows_[a];
    const auto& rb = rows_[b];
    std::size_t i = 0, j = 0;
    while (i < ra.size() && j < rb.size()) {
      if (ra[i].first == rb[j].first) {
        dot += ra[i].second * rb[j].second;
        ++i;
        ++j;
      } else if (ra[i].first < rb[j].first) {
        ++i;
      } else {
        ++j;
      }
    }
  } else {
    const double* pa = values_.data() + a * dim_;
    const double* pb = values_.data() + b * dim_;
    for (std::size_t k = 0; k < dim_; ++k) dot += pa[k] * pb[k];
  }
  return dot / (na * nb);
}

std::vector<std::string> tfidf_vocabulary(const Corpus& corpus) {
  std::map<std::string, int> seen;
  for (const MethodRecord& m : corpus.methods) {
    for (const std::string& t : m.tokens) seen.emplace(t, 0);
  }
  std::vector<std::string> vocab;
  vocab.reserve(seen.size());
  for (const auto& [t, unused] : seen) {
    (void)unused;
    vocab.push_back(t);
  }
  return vocab;
}

EmbeddingMatrix tfidf_embed(const Corpus& corpus, IdfMode mode) {
  // One pass for vocabulary + collection/document frequencies.
  std::map<std::string, std::pair<long, long>> freq;  // token -> (cf, df)
  long total_tokens = 0;
  for (const MethodRecord& m : corpus.methods) {
    total_tokens += static_cast<long>(m.tokens.size());
    std::map<std::string, long> local;
    for (const std::string& t : m.tokens) ++local[t];
    for (const auto& [t, count] : local) {
      auto& [cf, df] = freq[t];
      cf += count;
      df += 1;
    }
  }
  if (freq.empty()) throw ValidationError("empty vocabulary: corpus has no tokens");

  std::map<std::string, std::size_t> column;
  std::vector<double> idf(freq.size(), 0.0);
  std::size_t next_col = 0;
  double n_methods = static_cast<double>(corpus.n_methods());
  for (const auto& [t, counts] : freq) {
    const auto& [cf, df] = counts;
    idf[next_col] = mode == IdfMode::Collection
                        ? std::log(static_cast<double>(total_tokens) / static_cast<double>(cf))
                        : std::log(n_methods / static_cast<double>(df));
    column.emplace(t, next_col);
    ++next_col;
  }

  EmbeddingMatrix m = EmbeddingMatrix::sparse(corpus.n_methods(), freq.size(), Provider::Tfidf);
  for (const MethodRecord& rec : corpus.methods) {
    std::map<std::size_t, long> tf;
    for (const std::string& t : rec.tokens) ++tf[column.at(t)];
    std::vector<std::pair<std::size_t, double>> row;
    row.reserve(tf.size());
    for (const auto& [col, count] : tf) {
      row.emplace_back(col, static_cast<double>(count) * idf[col]);
    }
    m.set_sparse_row(static_cast<std::size_t>(rec.method_id), std::move(row));
  }
  return m;
}

EmbeddingMatrix read_embeddings_jsonl(const std::string& path, std::size_t n) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open embeddings file: " + path);

  std::vector<std::vector<double>> vectors(n);
  std::vector<bool> present(n, false);
  std::size_t dim = 0;
  bool dim_known = false;

  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object() || !rec.contains("method_id") ||
        !rec.contains("vector") || !rec["method_id"].is_number_integer() ||
        !rec["vector"].is_array()) {
      throw ValidationError("invalid embedding record at line " + std::to_string(line_no));
    }
    long id = rec["method_id"].get<long>();
    if (id < 0 || static_cast<std::size_t>(id) >= n) {
      throw ValidationError("unknown method_id " + std::to_string(id));
    }
    if (present[static_cast<std::size_t>(id)]) {
      throw ValidationError("duplicate method_id " + std::to_string(id));
    }
    std::vector<double> vec;
    vec.reserve(rec["vector"].size());
    for (const auto& v : rec["vector"]) {
      if (!v.is_number()) {
        throw ValidationError("non-finite value for method_id " + std::to_string(id));
      }
      double d = v.get<double>();
      if (!std::isfinite(d)) {
        throw ValidationError("non-finite value for method_id " + std::to_string(id));
      }
      vec.push_back(d);
    }
    if (!dim_known) {
      dim = vec.size();
      dim_known = true;
    } else if (vec.size() != dim) {
      throw ValidationError("ragged vector length for method_id " + std::to_string(id));
    }
    present[static_cast<std::size_t>(id)] = true;
    vectors[static_cast<std::size_t>(id)] = std::move(vec);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!present[i]) throw ValidationError("missing method_id " + std::to_string(i));
  }
  if (dim == 0) throw ValidationError("embeddings file declares zero-dimensional vectors");

  EmbeddingMatrix m = EmbeddingMatrix::dense(n, dim, Provider::External);
  for (std::size_t i = 0; i < n; ++i) m.set_dense_row(i, vectors[i]);
  return m;
}

EmbeddingMatrix import_embeddings(const std::string& path, const Corpus& corpus) {
  return read_embeddings_jsonl(path, corpus.n_methods());
}

double cosine(const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != v.size()) throw ValidationError("cosine dimension mismatch");
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return dot / (std::sqrt(nu) * std::sqrt(nv));
}

}  // namespace ripple
