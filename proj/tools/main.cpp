#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ripple/artifacts.hpp"
#include "ripple/benchmark.hpp"
#include "ripple/callgraph.hpp"
#include "ripple/corpus.hpp"
#include "ripple/embedding.hpp"
#include "ripple/errors.hpp"
#include "ripple/pipeline.hpp"
#include "ripple/propagation.hpp"
#include "ripple/ranking.hpp"

namespace {

using namespace ripple;

struct ExtractArgs {
  std::string repo;
  std::string out;
  std::vector<std::string> exclude;
  int threads = 0;
};

struct GraphArgs {
  std::string corpus;
  std::string out;
  std::string kind = "call";
  int threads = 0;
};

struct EmbedArgs {
  std::string corpus;
  std::string out;
  std::string provider = "tfidf";
  std::string path;
  std::string idf_mode = "collection";
};

struct PropagateArgs {
  std::string graph;
  std::string embeddings;
  std::string out;
  double w = 0.5;
  int orders = 2;
  int threads = 0;
};

struct RankArgs {
  std::string embeddings;
  std::string corpus;
  int query = -1;
  std::string setting;
  std::string weighting;
  std::string graph;
  int top_k = 0;
};

struct EvalArgs {
  std::string tasks;
  std::string rankings;
  int k = 10;
  std::string out = "report.json";
};

struct PipelineArgs {
  std::string config;
  std::string repo;
  std::string output_dir;
  std::string setting;
  std::string annotations;
  std::string snapshot_commit;
  std::string weighting;
  int k = -1;
  int threads = -1;
};

int run_extract(const ExtractArgs& a) {
  ExclusionRules rules;
  rules.globs = a.exclude;
  Corpus corpus = extract_corpus(a.repo, rules, a.threads);
  write_corpus_json(corpus, a.out);
  std::cout << "wrote " << a.out << " (" << corpus.n_methods() << " methods, "
            << corpus.excluded_test_files.size() << " test files excluded)\n";
  return 0;
}

int run_graph(const GraphArgs& a) {
  Corpus corpus = read_corpus_json(a.corpus);
  GraphArtifact art;
  art.kind = parse_graph_kind(a.kind);
  art.n_nodes = static_cast<int>(corpus.n_methods());
  if (art.kind == GraphKind::Call) {
    CallGraph g = build_call_graph(corpus, a.threads);
    art.edges = g.edges;
    art.unresolved = g.unresolved;
  } else {
    ClassGraph g = build_class_graph(corpus);
    art.edges = g.edges;
  }
  write_graph_json(art, a.out);
  std::cout << "wrote " << a.out << " (" << art.edges.size() << " edges)\n";
  return 0;
}

int run_embed(const EmbedArgs& a) {
  Corpus corpus = read_corpus_json(a.corpus);
  Provider provider = Provider::Tfidf;
  IdfMode idf_mode = IdfMode::Collection;
  EmbeddingMatrix m = [&] {
    if (a.provider == "tfidf") {
      provider = Provider::Tfidf;
      if (a.idf_mode == "collection") {
        idf_mode = IdfMode::Collection;
      } else if (a.idf_mode == "document") {
        idf_mode = IdfMode::Document;
      } else {
        throw ValidationError("unknown idf-mode: " + a.idf_mode);
      }
      return tfidf_embed(corpus, idf_mode);
    }
    if (a.provider == "external") {
      provider = Provider::External;
      if (a.path.empty()) throw ValidationError("external provider requires --path");
      return import_embeddings(a.path, corpus);
    }
    throw ValidationError("unknown provider: " + a.provider);
  }();
  write_embeddings_jsonl(m, a.out);
  write_embedding_manifest(provider, idf_mode, a.out + ".manifest.json");
  std::cout << "wrote " << a.out << " (" << m.n_rows() << " x " << m.dim() << ")\n";
  return 0;
}

int run_propagate(const PropagateArgs& a) {
  GraphArtifact graph = read_graph_json(a.graph);
  EmbeddingMatrix m =
      read_embeddings_jsonl(a.embeddings, static_cast<std::size_t>(graph.n_nodes));
  UndirectedGraph ug = UndirectedGraph::from_edges(graph.n_nodes, graph.edges);
  PropagationConfig config;
  config.w = a.w;
  config.max_order = a.orders;
  config.graph_kind = graph.kind;
  EmbeddingMatrix out = propagate(m, ug, config, a.threads);
  write_embeddings_jsonl(out, a.out);
  PropagationManifest manifest;
  std::string provider = read_manifest_provider(a.embeddings + ".manifest.json");
  manifest.provider = provider.empty() ? "external" : provider;
  manifest.w = a.w;
  manifest.orders = a.orders;
  manifest.graph = graph.kind;
  write_propagation_manifest(manifest, a.out + ".manifest.json");
  std::cout << "wrote " << a.out << " (" << out.n_rows() << " x " << out.dim() << ")\n";
  return 0;
}

int run_rank(const RankArgs& a) {
  Corpus corpus = read_corpus_json(a.corpus);
  EmbeddingMatrix m = read_embeddings_jsonl(a.embeddings, corpus.n_methods());
  Setting setting = parse_setting(a.setting);

  std::optional<UndirectedGraph> weighting_graph;
  if (!a.weighting.empty()) {
    if (a.weighting != "neighbor-halving") {
      throw ValidationError("unknown weighting: " + a.weighting);
    }
    if (a.graph.empty()) {
      throw ValidationError("--weighting neighbor-halving requires --graph");
    }
    GraphArtifact graph = read_graph_json(a.graph);
    if (graph.n_nodes != static_cast<int>(corpus.n_methods())) {
      throw ValidationError("graph nodes do not match corpus methods");
    }
    weighting_graph = UndirectedGraph::from_edges(graph.n_nodes, graph.edges);
  }

  std::vector<int> scope = scope_corpus(a.query, corpus, setting);
  RankedImpactList ranked =
      rank(a.query, m, scope, setting,
           weighting_graph.has_value() ? &*weighting_graph : nullptr);
  if (a.top_k > 0 && ranked.entries.size() > static_cast<std::size_t>(a.top_k)) {
    ranked.entries.resize(static_cast<std::size_t>(a.top_k));
  }
  std::cout << ranking_json_line(ranked) << "\n";
  return 0;
}

int run_eval(const EvalArgs& a) {
  std::vector<ImpactTask> tasks = read_tasks_json(a.tasks);
  std::vector<RankedImpactList> rankings = read_rankings_jsonl(a.rankings);
  if (a.k < 1) throw ValidationError("k must be >= 1");

  std::map<std::pair<int, Setting>, const RankedImpactList*> by_key;
  for (const RankedImpactList& r : rankings) {
    by_key.emplace(std::make_pair(r.query_id, r.setting), &r);
  }

  // A rankings file may cover a subset of the settings present in tasks.
  // Settings with no ranking at all are skipped with a note; within a
  // covered setting every task must have its ranking.
  std::set<Setting> covered;
  for (const RankedImpactList& r : rankings) covered.insert(r.setting);
  std::set<Setting> skipped;
  for (const ImpactTask& t : tasks) {
    if (!covered.count(t.setting)) skipped.insert(t.setting);
  }
  for (Setting s : skipped) {
    std::cerr << "note: no rankings for setting " << setting_name(s) << "; skipped\n";
  }

  std::map<Setting, std::vector<TaskScore>> by_setting;
  for (const ImpactTask& t : tasks) {
    if (skipped.count(t.setting)) continue;
    auto it = by_key.find({t.query_id, t.setting});
    if (it == by_key.end()) {
      throw ValidationError("no ranking for task " + t.task_id);
    }
    by_setting[t.setting].push_back(score_task(t, *it->second, a.k));
  }
  if (by_setting.empty()) throw ValidationError("no tasks to evaluate");

  std::vector<EvalReport> reports;
  for (auto& [setting, scores] : by_setting) {
    reports.push_back(aggregate(setting, a.k, std::move(scores)));
  }
  write_report_json(reports, a.out);
  std::cout << "wrote " << a.out << " (" << reports.size() << " setting reports)\n";
  return 0;
}

int run_pipeline_cmd(const PipelineArgs& a) {
  PipelineConfig config = pipeline_config_from_entries(parse_key_value_file(a.config));
  if (!a.repo.empty()) config.repo_root = a.repo;
  if (!a.output_dir.empty()) config.output_dir = a.output_dir;
  if (!a.setting.empty()) config.setting = parse_setting(a.setting);
  if (!a.annotations.empty()) config.annotations = a.annotations;
  if (!a.snapshot_commit.empty()) config.snapshot_commit = a.snapshot_commit;
  if (!a.weighting.empty()) config.weighting = a.weighting;
  if (a.k >= 0) config.k = a.k;
  if (a.threads >= 0) config.threads = a.threads;
  run_pipeline(config);
  std::cout << "pipeline artifacts in " << config.output_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"change-impact estimation over Java call graphs"};
  app.require_subcommand(1);

  ExtractArgs extract_args;
  CLI::App* extract = app.add_subcommand("extract", "extract a method corpus from a repo");
  extract->add_option("--repo", extract_args.repo, "repository root")->required();
  extract->add_option("--out", extract_args.out, "corpus.json output path")->required();
  extract->add_option("--exclude", extract_args.exclude, "extra test-file glob(s)");
  extract->add_option("--threads", extract_args.threads, "worker thread cap");

  GraphArgs graph_args;
  CLI::App* graph = app.add_subcommand("graph", "build the call or class graph");
  graph->add_option("--corpus", graph_args.corpus, "corpus.json path")->required();
  graph->add_option("--out", graph_args.out, "graph.json output path")->required();
  graph->add_option("--kind", graph_args.kind, "graph kind: call|class")
      ->check(CLI::IsMember({"call", "class"}));
  graph->add_option("--threads", graph_args.threads, "worker thread cap");

  EmbedArgs embed_args;
  CLI::App* embed = app.add_subcommand("embed", "produce or import method embeddings");
  embed->add_option("--corpus", embed_args.corpus, "corpus.json path")->required();
  embed->add_option("--out", embed_args.out, "embeddings JSONL output path")->required();
  embed->add_option("--provider", embed_args.provider, "tfidf|external")
      ->check(CLI::IsMember({"tfidf", "external"}));
  embed->add_option("--path", embed_args.path, "external embeddings JSONL");
  embed->add_option("--idf-mode", embed_args.idf_mode, "collection|document")
      ->check(CLI::IsMember({"collection", "document"}));

  PropagateArgs propagate_args;
  CLI::App* propagate = app.add_subcommand("propagate", "propagate embeddings over a graph");
  propagate->add_option("--graph", propagate_args.graph, "graph.json path")->required();
  propagate->add_option("--embeddings", propagate_args.embeddings, "embeddings JSONL path")
      ->required();
  propagate->add_option("--out", propagate_args.out, "propagated JSONL output path")
      ->required();
  propagate->add_option("--w", propagate_args.w, "balance weight (default 0.5)");
  propagate->add_option("--orders", propagate_args.orders, "max neighbor order (1..3)");
  propagate->add_option("--threads", propagate_args.threads, "worker thread cap");

  RankArgs rank_args;
  CLI::App* rank_cmd = app.add_subcommand("rank", "rank impact candidates for a query");
  rank_cmd->add_option("--embeddings", rank_args.embeddings, "embeddings JSONL path")
      ->required();
  rank_cmd->add_option("--corpus", rank_args.corpus, "corpus.json path")->required();
  rank_cmd->add_option("--query", rank_args.query, "query method id")->required();
  rank_cmd->add_option("--setting", rank_args.setting, "whole|inner|outer")
      ->required()
      ->check(CLI::IsMember({"whole", "inner", "outer"}));
  rank_cmd->add_option("--weighting", rank_args.weighting, "neighbor-halving");
  rank_cmd->add_option("--graph", rank_args.graph, "graph.json for the weighting");
  rank_cmd->add_option("--top-k", rank_args.top_k, "truncate the ranked list");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "score rankings against tasks");
  eval->add_option("--tasks", eval_args.tasks, "tasks.json path")->required();
  eval->add_option("--rankings", eval_args.rankings, "rankings JSONL path")->required();
  eval->add_option("--k", eval_args.k, "HIT@k cut point (default 10)");
  eval->add_option("--out", eval_args.out, "report.json output path");

  PipelineArgs pipeline_args;
  CLI::App* pipeline = app.add_subcommand("pipeline", "run every stage from a config file");
  pipeline->add_option("--config", pipeline_args.config, "key=value config file")
      ->required();
  pipeline->add_option("--repo", pipeline_args.repo, "override repo_root");
  pipeline->add_option("--output-dir", pipeline_args.output_dir, "override output_dir");
  pipeline->add_option("--setting", pipeline_args.setting, "override setting")
      ->check(CLI::IsMember({"whole", "inner", "outer"}));
  pipeline->add_option("--annotations", pipeline_args.annotations, "override annotations");
  pipeline->add_option("--snapshot-commit", pipeline_args.snapshot_commit,
                       "override snapshot_commit");
  pipeline->add_option("--weighting", pipeline_args.weighting, "override weighting");
  pipeline->add_option("--k", pipeline_args.k, "override k");
  pipeline->add_option("--threads", pipeline_args.threads, "override threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (extract->parsed()) return run_extract(extract_args);
    if (graph->parsed()) return run_graph(graph_args);
    if (embed->parsed()) return run_embed(embed_args);
    if (propagate->parsed()) return run_propagate(propagate_args);
    if (rank_cmd->parsed()) return run_rank(rank_args);
    if (eval->parsed()) return run_eval(eval_args);
    if (pipeline->parsed()) return run_pipeline_cmd(pipeline_args);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
