#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ripple/corpus.hpp"
#include "ripple/ranking.hpp"

namespace ripple {

/// One annotated changed line of a commit.
struct ChangeAnnotation {
  std::string repo;
  std::string commit_id;
  std::string parent_commit_id;
  std::string file_path;
  long line_number = 0;  // 1-based
  std::string label;     // bugfix | test | whitespace | refactoring | documentation | ...
};

/// Reads the annotation CSV (header `repo,commit,parent_commit,file_path,
/// line,label`). Quoted fields with doubled-quote escapes are honored.
std::vector<ChangeAnnotation> read_annotations_csv(const std::string& path);

/// One benchmark query: rank the corpus for `query_id`, judge against
/// `ground_truth`.
struct ImpactTask {
  std::string task_id;  // "<commit>:<query_id>:<setting>"
  std::string commit_id;
  int query_id = -1;
  std::vector<int> ground_truth;  // ascending, never contains query_id
  Setting setting = Setting::Whole;
};

struct TaskBuildStats {
  long bugfix_lines = 0;
  long other_label_lines = 0;
  long unmapped_lines = 0;      // bugfix lines outside any method
  long singleton_commits = 0;   // commits with fewer than 2 changed methods
  long filtered_small = 0;      // inner/outer tasks dropped by the size rule
  std::vector<std::string> skipped_commits;  // "commit <id>: <reason>"
};

/// Derives tasks from bug-fix annotations. Per commit, the changed-method
/// set M (located in the parent-commit snapshot) yields one whole task per
/// member; commits with |M| < 2 are removed; inner/outer variants keep only
/// filtered ground truth of size >= 2. Deterministic: commits ascending,
/// queries ascending, settings whole < inner < outer.
std::vector<ImpactTask> build_tasks(const std::vector<ChangeAnnotation>& annotations,
                                    const std::map<std::string, const Corpus*>& corpora,
                                    TaskBuildStats* stats = nullptr);

/// Method whose [start_line, end_line] spans `line` in `file_path`; the
/// innermost (largest start_line) wins when spans nest.
std::optional<int> locate_method(const Corpus& corpus, const std::string& file_path,
                                 long line);

struct TaskScore {
  std::string task_id;
  int first_hit_rank = 0;  // 1-based; 0 = no ground truth retrieved
  double reciprocal_rank = 0.0;
  double average_precision = 0.0;
  bool hit_at_k = false;
  long ground_truth_in_scope = 0;  // AP denominator
  long ground_truth_total = 0;
};

/// RR = 1/rank of the first ground-truth hit (0 on miss); AP = mean over
/// retrieved ground-truth members of precision at their rank; HIT@k =
/// first hit within the top k. Ground truth outside the ranking's scope is
/// excluded from the AP denominator.
TaskScore score_task(const ImpactTask& task, const RankedImpactList& ranking, int k);

struct EvalReport {
  Setting setting = Setting::Whole;
  int k = 10;
  long n_tasks = 0;
  double mrr = 0.0;
  double map = 0.0;
  double hit_at_k = 0.0;
  std::vector<TaskScore> per_task;
};

/// Arithmetic means over per-task scores; throws on zero tasks.
EvalReport aggregate(Setting setting, int k, std::vector<TaskScore> per_task);

}  // namespace ripple
