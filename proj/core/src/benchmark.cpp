#include "ripple/benchmark.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "ripple/errors.hpp"

namespace ripple {

namespace {

// RFC 4180-style row split: quoted fields, doubled-quote escapes. The
// annotation format never spans rows, so a newline inside quotes is not
// supported.
std::vector<std::string> split_csv_row(const std::string& line, long line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
    ++i;
  }
  if (quoted) {
    throw ValidationError("unterminated quote in annotations row " + std::to_string(line_no));
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

std::vector<ChangeAnnotation> read_annotations_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open annotations file: " + path);

  std::string line;
  long line_no = 0;
  if (!std::getline(in, line)) {
    throw ValidationError("annotations file is empty: " + path);
  }
  ++line_no;
  if (strip_cr(line) != "repo,commit,parent_commit,file_path,line,label") {
    throw ValidationError("unexpected annotations header: " + strip_cr(line));
  }

  std::vector<ChangeAnnotation> out;
  while (std::getline(in, line)) {
    ++line_no;
    std::string row = strip_cr(line);
    if (row.empty()) continue;
    std::vector<std::string> f = split_csv_row(row, line_no);
    if (f.size() != 6) {
      throw ValidationError("expected 6 fields in annotations row " + std::to_string(line_no));
    }
    ChangeAnnotation a;
    a.repo = f[0];
    a.commit_id = f[1];
    a.parent_commit_id = f[2];
    a.file_path = f[3];
    try {
      std::size_t pos = 0;
      a.line_number = std::stol(f[4], &pos);
      if (pos != f[4].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ValidationError("invalid line number in annotations row " + std::to_string(line_no));
    }
    if (a.line_number < 1) {
      throw ValidationError("line number must be >= 1 in annotations row " +
                            std::to_string(line_no));
    }
    a.label = f[5];
    out.push_back(std::move(a));
  }
  return out;
}

std::optional<int> locate_method(const Corpus& corpus, const std::string& file_path,
                                 long line) {
  auto it = corpus.file_index.find(file_path);
  if (it == corpus.file_index.end()) return std::nullopt;
  std::optional<int> best;
  long best_start = -1;
  for (int id : it->second) {
    const MethodRecord& m = corpus.method(id);
    if (line < m.start_line || line > m.end_line) continue;
    if (m.start_line > best_start) {
      best_start = m.start_line;
      best = id;
    }
  }
  return best;
}

std::vector<ImpactTask> build_tasks(const std::vector<ChangeAnnotation>& annotations,
                                    const std::map<std::string, const Corpus*>& corpora,
                                    TaskBuildStats* stats) {
  TaskBuildStats local;
  TaskBuildStats& st = stats != nullptr ? *stats : local;

  // commit -> (parent, bugfix rows), commits in ascending id order.
  struct CommitGroup {
    std::string parent;
    std::vector<const ChangeAnnotation*> rows;
  };
  std::map<std::string, CommitGroup> commits;
  for (const ChangeAnnotation& a : annotations) {
    if (a.label != "bugfix") {
      ++st.other_label_lines;
      continue;
    }
    ++st.bugfix_lines;
    CommitGroup& g = commits[a.commit_id];
    if (g.rows.empty()) g.parent = a.parent_commit_id;
    g.rows.push_back(&a);
  }

  std::vector<ImpactTask> tasks;
  std::set<std::tuple<std::string, int, Setting>> dedupe;
  for (const auto& [commit, group] : commits) {
    auto corpus_it = corpora.find(group.parent);
    if (corpus_it == corpora.end() || corpus_it->second == nullptr) {
      st.skipped_commits.push_back("commit " + commit + ": snapshot " + group.parent +
                                   " unavailable");
      continue;
    }
    const Corpus& corpus = *corpus_it->second;

    std::set<int> changed;
    for (const ChangeAnnotation* row : group.rows) {
      std::optional<int> id = locate_method(corpus, row->file_path, row->line_number);
      if (id.has_value()) {
        changed.insert(*id);
      } else {
        ++st.unmapped_lines;
      }
    }
    if (changed.size() < 2) {
      ++st.singleton_commits;
      continue;
    }

    std::vector<int> members(changed.begin(), changed.end());
    for (int query : members) {
      const std::string& query_file = corpus.method(query).file_path;
      std::vector<int> whole_gt;
      std::vector<int> inner_gt;
      std::vector<int> outer_gt;
      for (int other : members) {
        if (other == query) continue;
        whole_gt.push_back(other);
        if (corpus.method(other).file_path == query_file) {
          inner_gt.push_back(other);
        } else {
          outer_gt.push_back(other);
        }
      }
      auto emit = [&](Setting setting, std::vector<int> gt) {
        if (!dedupe.insert({commit, query, setting}).second) return;
        ImpactTask t;
        t.commit_id = commit;
        t.query_id = query;
        t.ground_truth = std::move(gt);
        t.setting = setting;
        t.task_id = commit + ":" + std::to_string(query) + ":" + setting_name(setting);
        tasks.push_back(std::move(t));
      };
      emit(Setting::Whole, whole_gt);
      if (inner_gt.size() >= 2) {
        emit(Setting::Inner, std::move(inner_gt));
      } else {
        ++st.filtered_small;
      }
      if (outer_gt.size() >= 2) {
        emit(Setting::Outer, std::move(outer_gt));
      } else {
        ++st.filtered_small;
      }
    }
  }
  return tasks;
}

TaskScore score_task(const ImpactTask& task, const RankedImpactList& ranking, int k) {
  if (ranking.query_id != task.query_id) {
    throw ValidationError("ranking query does not match task query");
  }
  if (ranking.setting != task.setting) {
    throw ValidationError("ranking setting does not match task setting");
  }
  std::set<int> gt(task.ground_truth.begin(), task.ground_truth.end());

  TaskScore s;
  s.task_id = task.task_id;
  s.ground_truth_total = static_cast<long>(gt.size());

  long in_scope = 0;
  for (const auto& [id, score] : ranking.entries) {
    (void)score;
    if (gt.count(id) > 0) ++in_scope;
  }
  s.ground_truth_in_scope = in_scope;

  long hits = 0;
  double ap_sum = 0.0;
  long rank_pos = 0;
  for (const auto& [id, score] : ranking.entries) {
    (void)score;
    ++rank_pos;
    if (gt.count(id) == 0) continue;
    ++hits;
    if (s.first_hit_rank == 0) {
      s.first_hit_rank = static_cast<int>(rank_pos);
      s.reciprocal_rank = 1.0 / static_cast<double>(rank_pos);
    }
    ap_sum += static_cast<double>(hits) / static_cast<double>(rank_pos);
  }
  s.average_precision = in_scope > 0 ? ap_sum / static_cast<double>(in_scope) : 0.0;
  s.hit_at_k = s.first_hit_rank > 0 && s.first_hit_rank <= k;
  return s;
}

EvalReport aggregate(Setting setting, int k, std::vector<TaskScore> per_task) {
  if (per_task.empty()) throw ValidationError("no tasks to aggregate");
  EvalReport r;
  r.setting = setting;
  r.k = k;
  r.n_tasks = static_cast<long>(per_task.size());
  for (const TaskScore& s : per_task) {
    r.mrr += s.reciprocal_rank;
    r.map += s.average_precision;
    r.hit_at_k += s.hit_at_k ? 1.0 : 0.0;
  }
  double n = static_cast<double>(r.n_tasks);
  r.mrr /= n;
  r.map /= n;
  r.hit_at_k /= n;
  r.per_task = std::move(per_task);
  return r;
}

}  // namespace ripple
