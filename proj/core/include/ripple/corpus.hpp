#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ripple {

/// One extracted production method, identified by position in the corpus.
struct MethodRecord {
  int method_id = 0;
  std::string file_path;  // repo-relative, '/' separators
  std::string class_name;  // innermost enclosing class; "" outside any class
  std::vector<std::string> enclosing_class_chain;  // outermost first
  std::string method_name;
  int n_args = 0;
  int start_line = 1;  // 1-based, inclusive, first signature/modifier line
  int end_line = 1;    // 1-based, inclusive, closing brace (or ';')
  std::string raw_source;
  std::vector<std::string> tokens;  // preprocessed subtokens, lowercase
};

struct SkippedFile {
  std::string path;
  std::string reason;
};

struct Corpus {
  std::string repo_root;
  std::vector<MethodRecord> methods;  // method_id == index
  std::map<std::string, std::vector<int>> file_index;  // file_path -> ids
  std::vector<std::string> excluded_test_files;
  std::vector<SkippedFile> skipped_files;  // unreadable inputs, with reasons

  const MethodRecord& method(int id) const { return methods.at(static_cast<std::size_t>(id)); }
  int n_methods() const { return static_cast<int>(methods.size()); }

  void rebuild_file_index();
};

/// Decides which repository files are test code and therefore excluded.
/// Defaults follow Maven/Gradle layout: a path component equal to "test"
/// or "tests", or a "src/test/" prefix anywhere in the path. Extra glob
/// patterns extend (never replace) the defaults.
struct ExclusionRules {
  std::vector<std::string> globs;
  bool is_test_path(std::string_view relative_path) const;
};

/// Walks repo_root for .java files, extracts every method of every
/// non-excluded file, and assigns contiguous method ids in deterministic
/// order (lexicographic file path, then start line). Unreadable files are
/// recorded in Corpus::skipped_files and extraction continues. Throws
/// ValidationError when no method at all could be extracted.
Corpus extract_corpus(const std::filesystem::path& repo_root,
                      const ExclusionRules& rules = {}, int threads = 0);

/// Lexical preprocessing of a method body: comments and docstrings are
/// removed, identifiers are split into subtokens (camelCase humps,
/// underscores, letter/digit boundaries), string literal contents are kept
/// as words, punctuation is dropped, everything is lowercased.
std::vector<std::string> preprocess_method(std::string_view raw_source);

/// Subtoken split of a single word, exposed for tests.
std::vector<std::string> split_subtokens(std::string_view word);

}  // namespace ripple
