#include "ripple/corpus.hpp"

#include <algorithm>
#include <cctype>

#include "ripple/errors.hpp"
#include "ripple/java_parser.hpp"
#include "ripple/util.hpp"

namespace ripple {

namespace {

enum class CharClass { Lower, Upper, Digit, Other };

CharClass classify(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  if (std::islower(u)) return CharClass::Lower;
  if (std::isupper(u)) return CharClass::Upper;
  if (std::isdigit(u)) return CharClass::Digit;
  return CharClass::Other;
}

}  // namespace

std::vector<std::string> split_subtokens(std::string_view word) {
  // Boundaries: any non-alphanumeric char, lower->Upper, Upper->Upper
  // followed by lower (acronym end), and letter<->digit transitions.
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      out.push_back(to_lower(cur));
      cur.clear();
    }
  };
  for (std::size_t i = 0; i < word.size(); ++i) {
    CharClass c = classify(word[i]);
    if (c == CharClass::Other) {
      flush();
      continue;
    }
    if (!cur.empty()) {
      CharClass prev = classify(cur.back());
      bool boundary = false;
      if (prev == CharClass::Lower && c == CharClass::Upper) boundary = true;
      if ((prev == CharClass::Digit) != (c == CharClass::Digit)) boundary = true;
      if (prev == CharClass::Upper && c == CharClass::Upper && i + 1 < word.size() &&
          classify(word[i + 1]) == CharClass::Lower) {
        boundary = true;
      }
      if (boundary) flush();
    }
    cur.push_back(word[i]);
  }
  flush();
  return out;
}

std::vector<std::string> preprocess_method(std::string_view raw_source) {
  std::vector<std::string> out;
  for (const JavaToken& t : lex_java(raw_source)) {
    switch (t.kind) {
      case TokKind::Identifier:
      case TokKind::Number: {
        auto parts = split_subtokens(t.text);
        out.insert(out.end(), parts.begin(), parts.end());
        break;
      }
      case TokKind::Str:
      case TokKind::CharLit: {
        auto parts = split_subtokens(t.text);
        out.insert(out.end(), parts.begin(), parts.end());
        break;
      }
      case TokKind::Punct:
        break;  // operators, braces, and annotation '@' sigils are dropped
    }
  }
  return out;
}

bool ExclusionRules::is_test_path(std::string_view relative_path) const {
  for (std::string_view comp : path_components(relative_path)) {
    if (comp == "test" || comp == "tests") return true;
  }
  if (relative_path.find("src/test/") != std::string_view::npos) return true;
  for (const std::string& g : globs) {
    if (glob_match(g, relative_path)) return true;
  }
  return false;
}

void Corpus::rebuild_file_index() {
  file_index.clear();
  for (const MethodRecord& m : methods) {
    file_index[m.file_path].push_back(m.method_id);
  }
}

namespace {

struct FileExtraction {
  std::vector<MethodRecord> methods;  // ids unassigned
  std::string error;                  // non-empty on read failure
};

FileExtraction extract_file(const std::filesystem::path& abs_path, const std::string& rel) {
  FileExtraction result;
  std::string text;
  try {
    text = read_text_file(abs_path);
  } catch (const IoError& e) {
    result.error = e.what();
    return result;
  }
  FileAnalysis analysis = analyze_java_file(text);
  result.methods.reserve(analysis.methods.size());
  for (const MethodInfo& mi : analysis.methods) {
    MethodRecord rec;
    rec.file_path = rel;
    if (mi.class_index >= 0) {
      const ClassInfo& cls = analysis.classes[static_cast<std::size_t>(mi.class_index)];
      rec.class_name = cls.name;
      rec.enclosing_class_chain = cls.chain;
    }
    rec.method_name = mi.name;
    rec.n_args = mi.n_args;
    rec.start_line = mi.start_line;
    rec.end_line = mi.end_line;
    const JavaToken& first = analysis.tokens[mi.first_tok];
    const JavaToken& last = analysis.tokens[mi.last_tok];
    rec.raw_source = text.substr(first.begin, last.end - first.begin);
    rec.tokens = preprocess_method(rec.raw_source);
    result.methods.push_back(std::move(rec));
  }
  return result;
}

}  // namespace

Corpus extract_corpus(const std::filesystem::path& repo_root, const ExclusionRules& rules,
                      int threads) {
  namespace fs = std::filesystem;
  if (!fs::exists(repo_root) || !fs::is_directory(repo_root)) {
    throw IoError("repository root does not exist: " + repo_root.string());
  }

  Corpus corpus;
  corpus.repo_root = repo_root.generic_string();

  // Collect candidate files first so ids are stable regardless of
  // directory iteration order or thread interleaving.
  std::vector<std::pair<std::string, fs::path>> files;  // (relative, absolute)
  for (const auto& entry : fs::recursive_directory_iterator(
           repo_root, fs::directory_options::skip_permission_denied)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().extension() != ".java") continue;
    std::string rel = relative_slash_path(entry.path(), repo_root);
    if (rules.is_test_path(rel)) {
      corpus.excluded_test_files.push_back(rel);
      continue;
    }
    files.emplace_back(std::move(rel), entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::sort(corpus.excluded_test_files.begin(), corpus.excluded_test_files.end());

  std::vector<FileExtraction> per_file(files.size());
  parallel_for(files.size(), threads,
               [&](std::size_t i) { per_file[i] = extract_file(files[i].second, files[i].first); });

  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!per_file[i].error.empty()) {
      corpus.skipped_files.push_back(SkippedFile{files[i].first, per_file[i].error});
      continue;
    }
    // Deterministic order within a file: start line, then original order.
    std::stable_sort(per_file[i].methods.begin(), per_file[i].methods.end(),
                     [](const MethodRecord& a, const MethodRecord& b) {
                       return a.start_line < b.start_line;
                     });
    for (MethodRecord& rec : per_file[i].methods) {
      rec.method_id = static_cast<int>(corpus.methods.size());
      corpus.methods.push_back(std::move(rec));
    }
  }
  corpus.rebuild_file_index();

  if (corpus.methods.empty()) {
    throw ValidationError("no methods extracted from " + corpus.repo_root + " (" +
                          std::to_string(corpus.excluded_test_files.size()) +
                          " files excluded as tests)");
  }
  return corpus;
}

}  // namespace ripple
