#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ripple/corpus.hpp"
#include "ripple/embedding.hpp"
#include "ripple/propagation.hpp"

namespace ripple {

enum class Setting { Whole, Inner, Outer };

std::string setting_name(Setting s);
Setting parse_setting(const std::string& name);

/// Ranked candidates for one query, descending score, ties broken by
/// ascending method_id; the query itself never appears.
struct RankedImpactList {
  int query_id = -1;
  Setting setting = Setting::Whole;
  std::vector<std::pair<int, double>> entries;  // (method_id, score)
};

/// whole: all ids != query; inner: same file as the query; outer:
/// different file. Always ascending.
std::vector<int> scope_corpus(int query_id, const Corpus& corpus, Setting setting);

/// Scores every scope member by cosine against the query row; when
/// `weighting_graph` is given, the query's order-1 neighbors get their
/// cosine distance halved before sorting.
RankedImpactList rank(int query_id, const EmbeddingMatrix& m,
                      const std::vector<int>& scope, Setting setting,
                      const UndirectedGraph* weighting_graph = nullptr);

}  // namespace ripple
