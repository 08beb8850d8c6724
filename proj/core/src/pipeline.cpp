#include "ripple/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "ripple/artifacts.hpp"
#include "ripple/benchmark.hpp"
#include "ripple/callgraph.hpp"
#include "ripple/errors.hpp"
#include "ripple/util.hpp"

namespace fs = std::filesystem;

namespace ripple {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
    return v.substr(1, v.size() - 2);
  }
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("invalid integer for config key " + key + ": " + value);
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("invalid number for config key " + key + ": " + value);
  }
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_key_value_file(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("invalid config line " + std::to_string(line_no) +
                            " (expected key=value)");
    }
    std::string key = trim(t.substr(0, eq));
    std::string value = unquote(trim(t.substr(eq + 1)));
    if (key.empty()) {
      throw ValidationError("empty key on config line " + std::to_string(line_no));
    }
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

PipelineConfig pipeline_config_from_entries(
    const std::vector<std::pair<std::string, std::string>>& entries) {
  PipelineConfig c;
  for (const auto& [key, value] : entries) {
    if (key == "repo_root") {
      c.repo_root = value;
    } else if (key == "output_dir") {
      c.output_dir = value;
    } else if (key == "setting") {
      c.setting = parse_setting(value);
    } else if (key == "k") {
      c.k = parse_int(key, value);
    } else if (key == "annotations") {
      c.annotations = value;
    } else if (key == "snapshot_commit") {
      c.snapshot_commit = value;
    } else if (key == "weighting") {
      c.weighting = value;
    } else if (key == "threads") {
      c.threads = parse_int(key, value);
    } else if (key == "exclude") {
      c.exclude_globs.push_back(value);
    } else if (key == "embedding.provider") {
      if (value == "tfidf") {
        c.embedding.provider = Provider::Tfidf;
      } else if (value == "external") {
        c.embedding.provider = Provider::External;
      } else {
        throw ValidationError("unknown embedding provider: " + value);
      }
    } else if (key == "embedding.path") {
      c.embedding.path = value;
    } else if (key == "embedding.idf_mode") {
      if (value == "collection") {
        c.embedding.idf_mode = IdfMode::Collection;
      } else if (value == "document") {
        c.embedding.idf_mode = IdfMode::Document;
      } else {
        throw ValidationError("unknown idf_mode: " + value);
      }
    } else if (key == "propagation.w") {
      c.propagation.w = parse_double(key, value);
    } else if (key == "propagation.max_order" || key == "propagation.orders") {
      c.propagation.max_order = parse_int(key, value);
    } else if (key == "propagation.graph_kind") {
      c.propagation.graph_kind = parse_graph_kind(value);
    } else if (key == "propagation.neighbor_mode") {
      if (value == "exact") {
        c.propagation.neighbor_mode = NeighborMode::Exact;
      } else if (value == "within") {
        c.propagation.neighbor_mode = NeighborMode::Within;
      } else {
        throw ValidationError("unknown neighbor_mode: " + value);
      }
    } else {
      throw ValidationError("unknown config key: " + key);
    }
  }
  return c;
}

void validate_pipeline_config(const PipelineConfig& config) {
  if (config.repo_root.empty()) throw ValidationError("config requires repo_root");
  if (config.output_dir.empty()) throw ValidationError("config requires output_dir");
  if (config.annotations.empty()) throw ValidationError("config requires annotations");
  if (config.embedding.provider == Provider::External && config.embedding.path.empty()) {
    throw ValidationError("external embedding provider requires embedding.path");
  }
  if (config.k < 1) throw ValidationError("k must be >= 1");
  if (config.propagation.max_order < 1 || config.propagation.max_order > 3) {
    throw ValidationError("propagation.max_order must be in [1, 3]");
  }
  if (config.propagation.w < 0.0) throw ValidationError("propagation.w must be >= 0");
  if (!config.weighting.empty() && config.weighting != "neighbor-halving") {
    throw ValidationError("unknown weighting: " + config.weighting);
  }
}

void run_pipeline(const PipelineConfig& config) {
  validate_pipeline_config(config);
  fs::create_directories(config.output_dir);
  auto out_path = [&](const char* name) {
    return (fs::path(config.output_dir) / name).string();
  };

  // Extract.
  ExclusionRules rules;
  rules.globs = config.exclude_globs;
  Corpus corpus = extract_corpus(config.repo_root, rules, config.threads);
  write_corpus_json(corpus, out_path("corpus.json"));

  // Graph.
  GraphArtifact graph_art;
  graph_art.kind = config.propagation.graph_kind;
  graph_art.n_nodes = static_cast<int>(corpus.n_methods());
  if (config.propagation.graph_kind == GraphKind::Call) {
    CallGraph g = build_call_graph(corpus, config.threads);
    graph_art.edges = g.edges;
    graph_art.unresolved = g.unresolved;
  } else {
    ClassGraph g = build_class_graph(corpus);
    graph_art.edges = g.edges;
  }
  write_graph_json(graph_art, out_path("graph.json"));

  // Embed.
  EmbeddingMatrix m = config.embedding.provider == Provider::Tfidf
                          ? tfidf_embed(corpus, config.embedding.idf_mode)
                          : import_embeddings(config.embedding.path, corpus);
  write_embeddings_jsonl(m, out_path("embeddings.jsonl"));
  write_embedding_manifest(config.embedding.provider, config.embedding.idf_mode,
                           out_path("embeddings.jsonl") + ".manifest.json");

  // Propagate.
  UndirectedGraph ug = UndirectedGraph::from_edges(graph_art.n_nodes, graph_art.edges);
  EmbeddingMatrix propagated = propagate(m, ug, config.propagation, config.threads);
  write_embeddings_jsonl(propagated, out_path("propagated.jsonl"));
  PropagationManifest manifest;
  manifest.provider = config.embedding.provider == Provider::Tfidf ? "tfidf" : "external";
  manifest.w = config.propagation.w;
  manifest.orders = config.propagation.max_order;
  manifest.graph = config.propagation.graph_kind;
  write_propagation_manifest(manifest, out_path("propagated.jsonl") + ".manifest.json");

  // Tasks.
  std::vector<ChangeAnnotation> annotations = read_annotations_csv(config.annotations);
  std::string snapshot = config.snapshot_commit;
  if (snapshot.empty()) {
    std::set<std::string> parents;
    for (const ChangeAnnotation& a : annotations) {
      if (a.label == "bugfix") parents.insert(a.parent_commit_id);
    }
    if (parents.empty()) {
      throw ValidationError("annotations contain no bugfix rows");
    }
    if (parents.size() > 1) {
      throw ValidationError(
          "annotations span multiple parent commits; set snapshot_commit");
    }
    snapshot = *parents.begin();
  }
  std::map<std::string, const Corpus*> corpora{{snapshot, &corpus}};
  TaskBuildStats stats;
  std::vector<ImpactTask> tasks = build_tasks(annotations, corpora, &stats);
  write_tasks_json(tasks, out_path("tasks.json"), "pipeline");
  for (const std::string& reason : stats.skipped_commits) {
    std::cerr << "skipped: " << reason << "\n";
  }

  // Rank the configured setting.
  const UndirectedGraph* weighting_graph =
      config.weighting == "neighbor-halving" ? &ug : nullptr;
  std::vector<RankedImpactList> rankings;
  std::vector<const ImpactTask*> selected;
  for (const ImpactTask& t : tasks) {
    if (t.setting != config.setting) continue;
    selected.push_back(&t);
    std::vector<int> scope = scope_corpus(t.query_id, corpus, t.setting);
    rankings.push_back(rank(t.query_id, propagated, scope, t.setting, weighting_graph));
  }
  write_rankings_jsonl(rankings, out_path("rankings.jsonl"));

  // Evaluate.
  if (selected.empty()) {
    throw ValidationError("no tasks for setting " + setting_name(config.setting));
  }
  std::vector<TaskScore> scores;
  scores.reserve(selected.size());
  for (std::size_t i = 0; i < selected.size(); ++i) {
    scores.push_back(score_task(*selected[i], rankings[i], config.k));
  }
  EvalReport report = aggregate(config.setting, config.k, std::move(scores));
  write_report_json({report}, out_path("report.json"));
}

}  // namespace ripple
