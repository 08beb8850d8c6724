#include "ripple/ranking.hpp"

#include <algorithm>

#include "ripple/errors.hpp"

namespace ripple {

std::string setting_name(Setting s) {
  switch (s) {
    case Setting::Whole: return "whole";
    case Setting::Inner: return "inner";
    case Setting::Outer: return "outer";
  }
  return "whole";
}

Setting parse_setting(const std::string& name) {
  if (name == "whole") return Setting::Whole;
  if (name == "inner") return Setting::Inner;
  if (name == "outer") return Setting::Outer;
  throw ValidationError("unknown setting: " + name);
}

std::vector<int> scope_corpus(int query_id, const Corpus& corpus, Setting setting) {
  if (query_id < 0 || static_cast<std::size_t>(query_id) >= corpus.n_methods()) {
    throw ValidationError("query_id out of range: " + std::to_string(query_id));
  }
  const std::string& query_file = corpus.method(query_id).file_path;
  std::vector<int> scope;
  for (const MethodRecord& m : corpus.methods) {
    if (m.method_id == query_id) continue;
    switch (setting) {
      case Setting::Whole:
        scope.push_back(m.method_id);
        break;
      case Setting::Inner:
        if (m.file_path == query_file) scope.push_back(m.method_id);
        break;
      case Setting::Outer:
        if (m.file_path != query_file) scope.push_back(m.method_id);
        break;
    }
  }
  return scope;
}

RankedImpactList rank(int query_id, const EmbeddingMatrix& m,
                      const std::vector<int>& scope, Setting setting,
                      const UndirectedGraph* weighting_graph) {
  if (query_id < 0 || static_cast<std::size_t>(query_id) >= m.n_rows()) {
    throw ValidationError("query_id out of range: " + std::to_string(query_id));
  }
  RankedImpactList out;
  out.query_id = query_id;
  out.setting = setting;
  out.entries.reserve(scope.size());

  if (weighting_graph != nullptr) {
    std::vector<double> base(m.n_rows(), 0.0);
    for (int id : scope) {
      if (id == query_id) continue;
      base[static_cast<std::size_t>(id)] =
          m.row_cosine(static_cast<std::size_t>(query_id), static_cast<std::size_t>(id));
    }
    std::vector<double> adjusted = similarity_weighting(query_id, *weighting_graph, base);
    for (int id : scope) {
      if (id == query_id) continue;
      out.entries.emplace_back(id, adjusted[static_cast<std::size_t>(id)]);
    }
  } else {
    for (int id : scope) {
      if (id == query_id) continue;
      out.entries.emplace_back(
          id, m.row_cosine(static_cast<std::size_t>(query_id), static_cast<std::size_t>(id)));
    }
  }

  std::sort(out.entries.begin(), out.entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

}  // namespace ripple
