#include "ripple/artifacts.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ripple/errors.hpp"
#include "ripple/util.hpp"

namespace ripple {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open artifact: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  ordered_json j = ordered_json::parse(buf.str(), nullptr, false);
  if (j.is_discarded()) throw ValidationError("invalid JSON in " + path);
  return j;
}

void check_envelope(const ordered_json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("schema_version") ||
      !j["schema_version"].is_number_integer()) {
    throw ValidationError("missing schema_version in " + path);
  }
  int version = j["schema_version"].get<int>();
  if (version != kSchemaVersion) {
    throw ValidationError("schema_version mismatch in " + path + ": expected " +
                          std::to_string(kSchemaVersion) + ", found " +
                          std::to_string(version));
  }
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

void dump_to_file(const ordered_json& j, const std::string& path) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace

std::string graph_kind_name(GraphKind kind) {
  return kind == GraphKind::Call ? "call" : "class";
}

GraphKind parse_graph_kind(const std::string& name) {
  if (name == "call") return GraphKind::Call;
  if (name == "class") return GraphKind::Class;
  throw ValidationError("unknown graph kind: " + name);
}

void write_corpus_json(const Corpus& corpus, const std::string& path) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["producer"] = "extract";
  j["repo_root"] = corpus.repo_root;
  ordered_json methods = ordered_json::array();
  for (const MethodRecord& m : corpus.methods) {
    ordered_json rec;
    rec["method_id"] = m.method_id;
    rec["file_path"] = m.file_path;
    rec["class_name"] = m.class_name;
    rec["enclosing_class_chain"] = m.enclosing_class_chain;
    rec["method_name"] = m.method_name;
    rec["n_args"] = m.n_args;
    rec["start_line"] = m.start_line;
    rec["end_line"] = m.end_line;
    rec["raw_source"] = m.raw_source;
    rec["tokens"] = m.tokens;
    methods.push_back(std::move(rec));
  }
  j["methods"] = std::move(methods);
  j["excluded_test_files"] = corpus.excluded_test_files;
  dump_to_file(j, path);
}

Corpus read_corpus_json(const std::string& path) {
  ordered_json j = parse_file(path);
  check_envelope(j, path);
  require(j.contains("repo_root") && j["repo_root"].is_string(),
          "missing repo_root in " + path);
  require(j.contains("methods") && j["methods"].is_array(), "missing methods in " + path);

  Corpus corpus;
  corpus.repo_root = j["repo_root"].get<std::string>();
  for (const auto& rec : j["methods"]) {
    require(rec.is_object(), "malformed method record in " + path);
    MethodRecord m;
    m.method_id = rec.at("method_id").get<int>();
    m.file_path = rec.at("file_path").get<std::string>();
    m.class_name = rec.at("class_name").get<std::string>();
    m.enclosing_class_chain = rec.at("enclosing_class_chain").get<std::vector<std::string>>();
    m.method_name = rec.at("method_name").get<std::string>();
    m.n_args = rec.at("n_args").get<int>();
    m.start_line = rec.at("start_line").get<long>();
    m.end_line = rec.at("end_line").get<long>();
    m.raw_source = rec.at("raw_source").get<std::string>();
    m.tokens = rec.at("tokens").get<std::vector<std::string>>();
    corpus.methods.push_back(std::move(m));
  }
  if (j.contains("excluded_test_files")) {
    corpus.excluded_test_files = j["excluded_test_files"].get<std::vector<std::string>>();
  }
  for (std::size_t i = 0; i < corpus.methods.size(); ++i) {
    require(corpus.methods[i].method_id == static_cast<int>(i),
            "method_ids not contiguous in " + path);
  }
  corpus.rebuild_file_index();
  return corpus;
}

void write_graph_json(const GraphArtifact& graph, const std::string& path) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["producer"] = "graph";
  j["kind"] = graph_kind_name(graph.kind);
  j["n_nodes"] = graph.n_nodes;
  ordered_json edges = ordered_json::array();
  for (const auto& [a, b] : graph.edges) edges.push_back(ordered_json::array({a, b}));
  j["edges"] = std::move(edges);
  ordered_json unresolved = ordered_json::object();
  for (const auto& [reason, count] : graph.unresolved) unresolved[reason] = count;
  j["unresolved"] = std::move(unresolved);
  dump_to_file(j, path);
}

GraphArtifact read_graph_json(const std::string& path) {
  ordered_json j = parse_file(path);
  check_envelope(j, path);
  require(j.contains("n_nodes") && j["n_nodes"].is_number_integer(),
          "missing n_nodes in " + path);
  require(j.contains("edges") && j["edges"].is_array(), "missing edges in " + path);

  GraphArtifact g;
  g.kind = j.contains("kind") ? parse_graph_kind(j["kind"].get<std::string>())
                              : GraphKind::Call;
  g.n_nodes = j["n_nodes"].get<int>();
  require(g.n_nodes >= 0, "negative n_nodes in " + path);
  for (const auto& e : j["edges"]) {
    require(e.is_array() && e.size() == 2, "malformed edge in " + path);
    int u = e[0].get<int>();
    int v = e[1].get<int>();
    require(u >= 0 && u < g.n_nodes && v >= 0 && v < g.n_nodes,
            "edge endpoint out of range in " + path);
    g.edges.emplace_back(u, v);
  }
  if (j.contains("unresolved")) {
    for (const auto& [reason, count] : j["unresolved"].items()) {
      g.unresolved[reason] = count.get<long>();
    }
  }
  return g;
}

void write_embeddings_jsonl(const EmbeddingMatrix& m, const std::string& path) {
  std::string out;
  for (std::size_t i = 0; i < m.n_rows(); ++i) {
    ordered_json rec;
    rec["method_id"] = static_cast<long>(i);
    rec["vector"] = m.row_dense(i);
    out += rec.dump();
    out.push_back('\n');
  }
  write_text_file(path, out);
}

void write_propagation_manifest(const PropagationManifest& manifest,
                                const std::string& path) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["producer"] = "propagate";
  j["provider"] = manifest.provider;
  j["w"] = manifest.w;
  j["orders"] = manifest.orders;
  j["graph"] = graph_kind_name(manifest.graph);
  dump_to_file(j, path);
}

void write_embedding_manifest(Provider provider, IdfMode idf_mode,
                              const std::string& path) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["producer"] = "embed";
  j["provider"] = provider == Provider::Tfidf ? "tfidf" : "external";
  if (provider == Provider::Tfidf) {
    j["idf_mode"] = idf_mode == IdfMode::Collection ? "collection" : "document";
  }
  dump_to_file(j, path);
}

std::string read_manifest_provider(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "";
  std::ostringstream buf;
  buf << in.rdbuf();
  ordered_json j = ordered_json::parse(buf.str(), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("provider") ||
      !j["provider"].is_string()) {
    return "";
  }
  return j["provider"].get<std::string>();
}

std::string ranking_json_line(const RankedImpactList& ranking) {
  ordered_json j;
  j["query"] = ranking.query_id;
  j["setting"] = setting_name(ranking.setting);
  ordered_json ranked = ordered_json::array();
  for (const auto& [id, score] : ranking.entries) {
    ranked.push_back(ordered_json::array({id, score}));
  }
  j["ranked"] = std::move(ranked);
  return j.dump();
}

void write_rankings_jsonl(const std::vector<RankedImpactList>& rankings,
                          const std::string& path) {
  std::string out;
  for (const RankedImpactList& r : rankings) {
    out += ranking_json_line(r);
    out.push_back('\n');
  }
  write_text_file(path, out);
}

std::vector<RankedImpactList> read_rankings_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open rankings file: " + path);
  std::vector<RankedImpactList> out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ordered_json j = ordered_json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("query") ||
        !j.contains("setting") || !j.contains("ranked") || !j["ranked"].is_array()) {
      throw ValidationError("invalid ranking record at line " + std::to_string(line_no) +
                            " of " + path);
    }
    RankedImpactList r;
    r.query_id = j["query"].get<int>();
    r.setting = parse_setting(j["setting"].get<std::string>());
    for (const auto& e : j["ranked"]) {
      require(e.is_array() && e.size() == 2,
              "malformed ranked entry at line " + std::to_string(line_no) + " of " + path);
      r.entries.emplace_back(e[0].get<int>(), e[1].get<double>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_tasks_json(const std::vector<ImpactTask>& tasks, const std::string& path,
                      const std::string& producer) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["producer"] = producer;
  ordered_json arr = ordered_json::array();
  for (const ImpactTask& t : tasks) {
    ordered_json rec;
    rec["task_id"] = t.task_id;
    rec["commit_id"] = t.commit_id;
    rec["query_id"] = t.query_id;
    rec["ground_truth"] = t.ground_truth;
    rec["setting"] = setting_name(t.setting);
    arr.push_back(std::move(rec));
  }
  j["tasks"] = std::move(arr);
  dump_to_file(j, path);
}

std::vector<ImpactTask> read_tasks_json(const std::string& path) {
  ordered_json j = parse_file(path);
  const ordered_json* arr = nullptr;
  if (j.is_array()) {
    arr = &j;
  } else {
    check_envelope(j, path);
    require(j.contains("tasks") && j["tasks"].is_array(), "missing tasks in " + path);
    arr = &j["tasks"];
  }
  std::vector<ImpactTask> out;
  for (const auto& rec : *arr) {
    require(rec.is_object(), "malformed task record in " + path);
    ImpactTask t;
    t.task_id = rec.at("task_id").get<std::string>();
    t.commit_id = rec.at("commit_id").get<std::string>();
    t.query_id = rec.at("query_id").get<int>();
    t.ground_truth = rec.at("ground_truth").get<std::vector<int>>();
    t.setting = parse_setting(rec.at("setting").get<std::string>());
    out.push_back(std::move(t));
  }
  return out;
}

void write_report_json(const std::vector<EvalReport>& reports, const std::string& path) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["producer"] = "eval";
  ordered_json arr = ordered_json::array();
  for (const EvalReport& r : reports) {
    ordered_json rep;
    rep["setting"] = setting_name(r.setting);
    rep["k"] = r.k;
    rep["n_tasks"] = r.n_tasks;
    rep["mRR"] = r.mrr;
    rep["mAP"] = r.map;
    rep["HIT@k"] = r.hit_at_k;
    ordered_json per_task = ordered_json::array();
    for (const TaskScore& s : r.per_task) {
      ordered_json rec;
      rec["task_id"] = s.task_id;
      if (s.first_hit_rank > 0) rec["first_hit_rank"] = s.first_hit_rank;
      rec["reciprocal_rank"] = s.reciprocal_rank;
      rec["average_precision"] = s.average_precision;
      rec["hit_at_k"] = s.hit_at_k;
      per_task.push_back(std::move(rec));
    }
    rep["per_task"] = std::move(per_task);
    arr.push_back(std::move(rep));
  }
  j["reports"] = std::move(arr);
  dump_to_file(j, path);
}

}  // namespace ripple
