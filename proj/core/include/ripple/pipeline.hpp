#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ripple/embedding.hpp"
#include "ripple/propagation.hpp"
#include "ripple/ranking.hpp"

namespace ripple {

struct EmbeddingConfig {
  Provider provider = Provider::Tfidf;
  std::string path;  // required for external
  IdfMode idf_mode = IdfMode::Collection;
};

struct PipelineConfig {
  std::string repo_root;
  EmbeddingConfig embedding;
  PropagationConfig propagation;
  Setting setting = Setting::Whole;
  int k = 10;
  std::string output_dir;
  std::string annotations;      // change-annotation CSV
  std::string snapshot_commit;  // parent commit the working tree corresponds to;
                                // defaults to the CSV's unique parent commit
  std::string weighting;        // "" | "neighbor-halving"
  std::vector<std::string> exclude_globs;
  int threads = 0;
};

/// Key=value lines, '#' comments, blank lines ignored; keys may repeat.
std::vector<std::pair<std::string, std::string>> parse_key_value_file(
    const std::string& path);

/// Builds a PipelineConfig from parsed entries; unknown keys are rejected.
PipelineConfig pipeline_config_from_entries(
    const std::vector<std::pair<std::string, std::string>>& entries);

/// Validates required fields and value ranges, resolving interactions
/// (external provider requires a path).
void validate_pipeline_config(const PipelineConfig& config);

/// extract -> graph -> embed -> propagate -> tasks -> rank -> eval, writing
/// every artifact under output_dir. Deterministic: identical inputs yield
/// byte-identical artifact trees.
void run_pipeline(const PipelineConfig& config);

}  // namespace ripple
