#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ripple/benchmark.hpp"
#include "ripple/callgraph.hpp"
#include "ripple/corpus.hpp"
#include "ripple/embedding.hpp"
#include "ripple/ranking.hpp"

namespace ripple {

/// Version embedded in every object artifact; readers reject mismatches.
inline constexpr int kSchemaVersion = 1;

std::string graph_kind_name(GraphKind kind);
GraphKind parse_graph_kind(const std::string& name);

void write_corpus_json(const Corpus& corpus, const std::string& path);
Corpus read_corpus_json(const std::string& path);

/// Either graph kind in one artifact shape; class graphs have no
/// unresolved counters.
struct GraphArtifact {
  GraphKind kind = GraphKind::Call;
  int n_nodes = 0;
  std::vector<std::pair<int, int>> edges;
  std::map<std::string, long> unresolved;
};

void write_graph_json(const GraphArtifact& graph, const std::string& path);
GraphArtifact read_graph_json(const std::string& path);

/// JSON Lines, one {"method_id", "vector"} per row, ids ascending.
void write_embeddings_jsonl(const EmbeddingMatrix& m, const std::string& path);

/// Sidecar describing how a propagated matrix was produced.
struct PropagationManifest {
  std::string provider;  // "tfidf" | "external"
  double w = 0.5;
  int orders = 2;
  GraphKind graph = GraphKind::Call;
};

void write_propagation_manifest(const PropagationManifest& manifest,
                                const std::string& path);

/// Sidecar naming the provider of a freshly embedded matrix.
void write_embedding_manifest(Provider provider, IdfMode idf_mode,
                              const std::string& path);

/// Provider recorded in a manifest sidecar, or "" when the file is absent
/// or carries none (hand-supplied external embeddings have no sidecar).
std::string read_manifest_provider(const std::string& path);

std::string ranking_json_line(const RankedImpactList& ranking);
void write_rankings_jsonl(const std::vector<RankedImpactList>& rankings,
                          const std::string& path);
std::vector<RankedImpactList> read_rankings_jsonl(const std::string& path);

void write_tasks_json(const std::vector<ImpactTask>& tasks, const std::string& path,
                      const std::string& producer);
/// Accepts the enveloped object form or a bare array of task objects.
std::vector<ImpactTask> read_tasks_json(const std::string& path);

/// One report per setting, aggregates before the per-task array.
void write_report_json(const std::vector<EvalReport>& reports, const std::string& path);

}  // namespace ripple
