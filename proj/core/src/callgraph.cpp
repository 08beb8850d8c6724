#include "ripple/callgraph.hpp"

#include <algorithm>
#include <filesystem>
#include <set>

#include "ripple/errors.hpp"
#include "ripple/util.hpp"

namespace ripple {

namespace {

bool is_punct(const std::vector<JavaToken>& toks, std::size_t i, char c) {
  return i < toks.size() && toks[i].kind == TokKind::Punct && toks[i].text[0] == c;
}

bool is_ident(const std::vector<JavaToken>& toks, std::size_t i) {
  return i < toks.size() && toks[i].kind == TokKind::Identifier;
}

bool word_at(const std::vector<JavaToken>& toks, std::size_t i, std::string_view w) {
  return is_ident(toks, i) && toks[i].text == w;
}

// Index one past the matching close bracket, or `hi` when unbalanced.
std::size_t skip_balanced(const std::vector<JavaToken>& toks, std::size_t i,
                          std::size_t hi, char open, char close) {
  int depth = 0;
  while (i < hi) {
    if (is_punct(toks, i, open)) ++depth;
    else if (is_punct(toks, i, close)) {
      --depth;
      if (depth == 0) return i + 1;
    }
    ++i;
  }
  return hi;
}

// Balanced '<...>' holding only type-argument tokens; 0 when not type-like.
std::size_t typeish_generic_end(const std::vector<JavaToken>& toks, std::size_t i,
                                std::size_t hi) {
  int depth = 0;
  std::size_t k = i;
  while (k < hi) {
    const JavaToken& t = toks[k];
    if (t.kind == TokKind::Punct) {
      char c = t.text[0];
      if (c == '<') ++depth;
      else if (c == '>') {
        --depth;
        if (depth == 0) return k + 1;
      } else if (c != '.' && c != ',' && c != '?' && c != '[' && c != ']' && c != '&') {
        return 0;
      }
    } else if (t.kind != TokKind::Identifier) {
      return 0;
    }
    ++k;
  }
  return 0;
}

// Generic argument list in expression position (e.g. `new Map<K, V>(...)`,
// `foo(Collections.<T>emptyList())`): type-like contents whose closer is
// followed by a constructor/member position. Commas inside never separate
// call arguments.
std::size_t expression_generic_end(const std::vector<JavaToken>& toks, std::size_t i,
                                   std::size_t hi) {
  std::size_t end = typeish_generic_end(toks, i, hi);
  if (end == 0) return 0;
  if (is_punct(toks, end, '(') || is_punct(toks, end, '.')) return end;
  if (is_ident(toks, end) && is_punct(toks, end + 1, '(')) return end;
  if (is_punct(toks, end, ':') && is_punct(toks, end + 1, ':')) return end;
  return 0;
}

// Argument count between '(' at p and its matching ')' at q.
int count_args(const std::vector<JavaToken>& toks, std::size_t p, std::size_t q) {
  if (p + 1 >= q) return 0;
  int paren = 0, bracket = 0, brace = 0;
  int args = 1;
  std::size_t i = p + 1;
  while (i < q) {
    if (toks[i].kind == TokKind::Punct) {
      char c = toks[i].text[0];
      if (c == '(') ++paren;
      else if (c == ')') --paren;
      else if (c == '[') ++bracket;
      else if (c == ']') --bracket;
      else if (c == '{') ++brace;
      else if (c == '}') --brace;
      else if (c == '<' && is_ident(toks, i - 1)) {
        std::size_t end = expression_generic_end(toks, i, q);
        if (end != 0) {
          i = end;
          continue;
        }
      } else if (c == ',' && paren == 0 && bracket == 0 && brace == 0) {
        ++args;
      }
    }
    ++i;
  }
  return args;
}

struct ReceiverInfo {
  ReceiverKind kind = ReceiverKind::None;
  std::vector<std::string> chain;
  bool annotation = false;  // name belongs to an annotation, not a call
};

// Classifies the receiver of the call whose name token sits at `name_idx`.
// `lo` bounds the backward walk (start of the scanned range).
ReceiverInfo classify_receiver(const std::vector<JavaToken>& toks, std::size_t name_idx,
                               std::size_t lo) {
  ReceiverInfo out;
  if (name_idx == 0 || name_idx <= lo) return out;
  std::size_t j = name_idx - 1;

  if (is_punct(toks, name_idx - 1, '@')) {
    out.annotation = true;
    return out;
  }

  // Explicit type arguments: `recv.<T>name(...)`. An arrow `->` is not one.
  if (is_punct(toks, j, '>')) {
    if (j > lo && is_punct(toks, j - 1, '-')) return out;  // lambda arrow
    int depth = 0;
    std::size_t g = j;
    bool matched = false;
    while (g > lo) {
      if (is_punct(toks, g, '>')) ++depth;
      else if (is_punct(toks, g, '<')) {
        --depth;
        if (depth == 0) {
          matched = true;
          break;
        }
      } else if (toks[g].kind != TokKind::Identifier && !is_punct(toks, g, '.') &&
                 !is_punct(toks, g, ',') && !is_punct(toks, g, '?') &&
                 !is_punct(toks, g, '[') && !is_punct(toks, g, ']') &&
                 !is_punct(toks, g, '&')) {
        break;  // comparison operator, not type arguments
      }
      --g;
    }
    if (!matched || g == lo || !is_punct(toks, g - 1, '.')) return out;
    j = g - 1;  // the '.' before '<'
  }

  if (!is_punct(toks, j, '.')) return out;

  // Walk `ident ('.' ident)*` backwards from the '.'.
  std::vector<std::string> rev;
  std::size_t dot = j;
  for (;;) {
    if (dot <= lo) break;
    std::size_t prev = dot - 1;
    const JavaToken& t = toks[prev];
    if (t.kind == TokKind::Identifier) {
      if (t.text == "this") {
        out.kind = rev.empty() ? ReceiverKind::This : ReceiverKind::Named;
        break;
      }
      if (t.text == "super") {
        out.kind = rev.empty() ? ReceiverKind::Super : ReceiverKind::Named;
        break;
      }
      if (is_java_keyword(t.text)) {
        out.kind = ReceiverKind::Unknown;
        break;
      }
      rev.push_back(t.text);
      if (prev > lo && is_punct(toks, prev - 1, '.')) {
        dot = prev - 1;
        continue;
      }
      if (prev > lo && is_punct(toks, prev - 1, '@')) {
        out.annotation = true;
        return out;
      }
      out.kind = ReceiverKind::Named;
      break;
    }
    if (t.kind == TokKind::Str || t.kind == TokKind::CharLit) {
      out.kind = ReceiverKind::Literal;
      break;
    }
    out.kind = ReceiverKind::Unknown;  // ')' ']' literal-number cast etc.
    break;
  }
  if (out.kind == ReceiverKind::None) out.kind = ReceiverKind::Unknown;
  out.chain.assign(rev.rbegin(), rev.rend());
  return out;
}

std::vector<std::string> split_dotted(const std::string& name) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t dot = name.find('.', start);
    if (dot == std::string::npos) {
      parts.push_back(name.substr(start));
      return parts;
    }
    parts.push_back(name.substr(start, dot - start));
    start = dot + 1;
  }
}

class Scanner {
public:
  Scanner(const std::vector<JavaToken>& toks, SiteScan& out) : toks_(toks), out_(out) {}

  void scan_method(int caller_id, std::size_t body_begin, std::size_t body_end) {
    caller_ = caller_id;
    scan_range(body_begin + 1, body_end, /*nested=*/false);
  }

private:
  const std::vector<JavaToken>& toks_;
  SiteScan& out_;
  int caller_ = -1;

  // Scans [lo, hi). In nested mode every call shape is counted and
  // discarded instead of emitted.
  void scan_range(std::size_t lo, std::size_t hi, bool nested) {
    std::size_t i = lo;
    while (i < hi) {
      const JavaToken& t = toks_[i];
      if (t.kind != TokKind::Identifier) {
        ++i;
        continue;
      }
      if (t.text == "new" && !is_punct(toks_, i - 1, '.')) {
        i = handle_new(i, lo, hi, nested);
        continue;
      }
      if ((t.text == "this" || t.text == "super") && is_punct(toks_, i + 1, '(')) {
        i = handle_call(i, lo, hi, nested,
                        t.text == "this" ? ReceiverKind::ThisCtor : ReceiverKind::SuperCtor,
                        {});
        continue;
      }
      if ((t.text == "class" || t.text == "interface" || t.text == "enum") &&
          !is_punct(toks_, i - 1, '.')) {
        // Local type declaration: skip its body wholesale.
        std::size_t open = i;
        while (open < hi && !is_punct(toks_, open, '{')) ++open;
        i = skip_balanced(toks_, open, hi, '{', '}');
        continue;
      }
      if (t.text == "record" && is_ident(toks_, i + 1) && is_punct(toks_, i + 2, '(') &&
          !is_punct(toks_, i - 1, '.')) {
        std::size_t open = i;
        while (open < hi && !is_punct(toks_, open, '{')) ++open;
        i = skip_balanced(toks_, open, hi, '{', '}');
        continue;
      }
      if (is_java_keyword(t.text)) {
        ++i;
        continue;
      }
      if (is_punct(toks_, i + 1, '(')) {
        ReceiverInfo recv = classify_receiver(toks_, i, lo > 0 ? lo - 1 : 0);
        if (recv.annotation) {
          i = skip_balanced(toks_, i + 1, hi, '(', ')');
          continue;
        }
        i = handle_call(i, lo, hi, nested, recv.kind, std::move(recv.chain));
        continue;
      }
      ++i;
    }
  }

  // Emits (or counts) the call whose name is at `name_idx` and whose '(' is
  // the next token; returns the resume index past the argument list.
  std::size_t handle_call(std::size_t name_idx, std::size_t lo, std::size_t hi,
                          bool nested, ReceiverKind kind,
                          std::vector<std::string> chain) {
    std::size_t p = name_idx + 1;
    std::size_t after = skip_balanced(toks_, p, hi, '(', ')');
    std::size_t q = after > p ? after - 1 : p;
    if (nested) {
      ++out_.nested_discarded;
    } else {
      CallSite site;
      site.caller_id = caller_;
      site.kind = kind;
      site.receiver_chain = std::move(chain);
      site.method_name = toks_[name_idx].text;
      site.n_args = count_args(toks_, p, q);
      site.line = toks_[name_idx].line;
      site.name_tok = name_idx;
      out_.sites.push_back(std::move(site));
    }
    if (q > p) scan_range(p + 1, q, /*nested=*/true);
    (void)lo;
    return after;
  }

  // `new Type[<...>](...)` constructor calls; arrays and anonymous bodies
  // are skipped.
  std::size_t handle_new(std::size_t i, std::size_t lo, std::size_t hi, bool nested) {
    std::size_t j = i + 1;
    if (!is_ident(toks_, j)) return i + 1;
    std::vector<std::string> chain;
    // Primitive array `new int[...]` has a keyword head; skip it.
    if (is_java_keyword(toks_[j].text)) return j + 1;
    chain.push_back(toks_[j].text);
    ++j;
    while (is_punct(toks_, j, '.') && is_ident(toks_, j + 1) &&
           !is_java_keyword(toks_[j + 1].text)) {
      chain.push_back(toks_[j + 1].text);
      j += 2;
    }
    if (is_punct(toks_, j, '<')) {
      // After `new Type` an angle bracket is always type arguments.
      int depth = 0;
      while (j < hi) {
        if (is_punct(toks_, j, '<')) ++depth;
        else if (is_punct(toks_, j, '>')) {
          --depth;
          if (depth == 0) {
            ++j;
            break;
          }
        }
        ++j;
      }
    }
    if (!is_punct(toks_, j, '(')) return j;  // array creation or malformed

    std::size_t p = j;
    std::size_t after = skip_balanced(toks_, p, hi, '(', ')');
    std::size_t q = after > p ? after - 1 : p;
    if (nested) {
      ++out_.nested_discarded;
    } else {
      CallSite site;
      site.caller_id = caller_;
      site.kind = ReceiverKind::NewObject;
      site.method_name = chain.back();
      site.receiver_chain = std::move(chain);
      site.n_args = count_args(toks_, p, q);
      site.line = toks_[i].line;
      site.name_tok = i;
      out_.sites.push_back(std::move(site));
    }
    if (q > p) scan_range(p + 1, q, /*nested=*/true);
    if (is_punct(toks_, after, '{')) {
      // Anonymous class body: its methods are not corpus methods.
      after = skip_balanced(toks_, after, hi, '{', '}');
    }
    (void)lo;
    return after;
  }
};

}  // namespace

SiteScan scan_call_sites(const AnalyzedCorpus& analyzed, std::size_t file_idx) {
  SiteScan out;
  const FileAnalysis& fa = analyzed.analysis(file_idx);
  Scanner scanner(fa.tokens, out);
  for (std::size_t k = 0; k < fa.methods.size(); ++k) {
    const MethodInfo& m = fa.methods[k];
    if (!m.has_body || m.body_end <= m.body_begin) continue;
    int id = analyzed.method_id(file_idx, k);
    if (id < 0) continue;
    scanner.scan_method(id, m.body_begin, m.body_end);
  }
  return out;
}

AnalyzedCorpus AnalyzedCorpus::load(const Corpus& corpus, int threads) {
  AnalyzedCorpus out;
  out.corpus_ = &corpus;
  out.file_paths_.reserve(corpus.file_index.size());
  for (const auto& [path, ids] : corpus.file_index) {
    (void)ids;
    out.file_paths_.push_back(path);
  }
  out.analyses_.resize(out.file_paths_.size());
  out.id_binding_.resize(out.file_paths_.size());

  namespace fs = std::filesystem;
  parallel_for(out.file_paths_.size(), threads, [&](std::size_t i) {
    fs::path full = fs::path(corpus.repo_root) / out.file_paths_[i];
    out.analyses_[i] = analyze_java_file(read_text_file(full.string()));
  });

  for (std::size_t i = 0; i < out.file_paths_.size(); ++i) {
    const auto& ids = corpus.file_index.at(out.file_paths_[i]);
    if (ids.size() != out.analyses_[i].methods.size()) {
      throw ValidationError("corpus does not match files on disk: " + out.file_paths_[i]);
    }
    out.id_binding_[i].assign(ids.begin(), ids.end());
  }
  return out;
}

CallResolver::CallResolver(const AnalyzedCorpus& analyzed) : analyzed_(&analyzed) {
  const Corpus& corpus = analyzed.corpus();
  method_location_.resize(corpus.n_methods(), {0, -1});
  method_local_idx_.resize(corpus.n_methods(), 0);
  for (std::size_t f = 0; f < analyzed.n_files(); ++f) {
    const FileAnalysis& fa = analyzed.analysis(f);
    files_by_package_[fa.package_name].push_back(f);
    for (std::size_t c = 0; c < fa.classes.size(); ++c) {
      classes_by_name_[fa.classes[c].name].push_back(ClassRef{f, c});
    }
    for (std::size_t k = 0; k < fa.methods.size(); ++k) {
      int id = analyzed.method_id(f, k);
      if (id < 0) continue;
      method_location_[static_cast<std::size_t>(id)] = {f, fa.methods[k].class_index};
      method_local_idx_[static_cast<std::size_t>(id)] = k;
    }
  }
}

std::vector<int> CallResolver::methods_in_class(const ClassRef& ref, const std::string& name,
                                                int n_args) const {
  std::vector<int> out;
  const FileAnalysis& fa = analyzed_->analysis(ref.file_idx);
  for (std::size_t k = 0; k < fa.methods.size(); ++k) {
    const MethodInfo& m = fa.methods[k];
    if (m.class_index != static_cast<int>(ref.class_idx)) continue;
    if (m.name != name || m.n_args != n_args) continue;
    int id = analyzed_->method_id(ref.file_idx, k);
    if (id >= 0) out.push_back(id);
  }
  return out;
}

// Walks nested classes of base's file whose chain extends base.chain by
// rest[first..].
bool CallResolver::descend_nested(ClassRef base, const std::vector<std::string>& rest,
                                  std::size_t first, ClassRef* out) const {
  if (first >= rest.size()) {
    *out = base;
    return true;
  }
  const FileAnalysis& fa = analyzed_->analysis(base.file_idx);
  std::vector<std::string> want = fa.classes[base.class_idx].chain;
  want.insert(want.end(), rest.begin() + static_cast<std::ptrdiff_t>(first), rest.end());
  for (std::size_t c = 0; c < fa.classes.size(); ++c) {
    if (fa.classes[c].chain == want) {
      *out = ClassRef{base.file_idx, c};
      return true;
    }
  }
  return false;
}

// Resolves `a.b.C`, `Outer.Inner`, or plain `C` from the context of
// `from_file`. Dotted chains try each package/class split (longest package
// first), then an in-scope outer class with nested descent.
bool CallResolver::lookup_chain(const std::vector<std::string>& chain,
                                std::size_t from_file, ClassRef* out) const {
  if (chain.empty()) return false;
  if (chain.size() == 1) return lookup_class(chain[0], from_file, out);

  for (std::size_t split = chain.size() - 1; split >= 1; --split) {
    std::string pkg;
    for (std::size_t i = 0; i < split; ++i) {
      if (!pkg.empty()) pkg.push_back('.');
      pkg += chain[i];
    }
    auto it = files_by_package_.find(pkg);
    if (it == files_by_package_.end()) continue;
    for (std::size_t f : it->second) {
      const FileAnalysis& fa = analyzed_->analysis(f);
      for (std::size_t c = 0; c < fa.classes.size(); ++c) {
        if (fa.classes[c].name == chain[split] && fa.classes[c].chain.size() == 1) {
          if (descend_nested(ClassRef{f, c}, chain, split + 1, out)) return true;
        }
      }
    }
  }

  ClassRef outer;
  if (lookup_class(chain[0], from_file, &outer) &&
      descend_nested(outer, chain, 1, out)) {
    return true;
  }
  return false;
}

bool CallResolver::lookup_class(const std::string& simple_name, std::size_t from_file,
                                ClassRef* out) const {
  const FileAnalysis& fa = analyzed_->analysis(from_file);

  // Same file, declaration order.
  for (std::size_t c = 0; c < fa.classes.size(); ++c) {
    if (fa.classes[c].name == simple_name) {
      *out = ClassRef{from_file, c};
      return true;
    }
  }

  // Explicit import; a match is final even when the target is external.
  for (const ImportDecl& imp : fa.imports) {
    if (imp.is_static || imp.wildcard) continue;
    std::size_t dot = imp.qualified.rfind('.');
    std::string last = dot == std::string::npos ? imp.qualified : imp.qualified.substr(dot + 1);
    if (last != simple_name) continue;
    std::string pkg = dot == std::string::npos ? "" : imp.qualified.substr(0, dot);
    auto it = files_by_package_.find(pkg);
    if (it != files_by_package_.end()) {
      for (std::size_t f : it->second) {
        const FileAnalysis& ofa = analyzed_->analysis(f);
        for (std::size_t c = 0; c < ofa.classes.size(); ++c) {
          if (ofa.classes[c].name == simple_name && ofa.classes[c].chain.size() == 1) {
            *out = ClassRef{f, c};
            return true;
          }
        }
      }
    }
    return false;
  }

  // Same package.
  auto pkg_it = files_by_package_.find(fa.package_name);
  if (pkg_it != files_by_package_.end()) {
    for (std::size_t f : pkg_it->second) {
      if (f == from_file) continue;
      const FileAnalysis& ofa = analyzed_->analysis(f);
      for (std::size_t c = 0; c < ofa.classes.size(); ++c) {
        if (ofa.classes[c].name == simple_name && ofa.classes[c].chain.size() == 1) {
          *out = ClassRef{f, c};
          return true;
        }
      }
    }
  }

  // Wildcard imports, declaration order.
  for (const ImportDecl& imp : fa.imports) {
    if (imp.is_static || !imp.wildcard) continue;
    auto it = files_by_package_.find(imp.qualified);
    if (it == files_by_package_.end()) continue;
    for (std::size_t f : it->second) {
      const FileAnalysis& ofa = analyzed_->analysis(f);
      for (std::size_t c = 0; c < ofa.classes.size(); ++c) {
        if (ofa.classes[c].name == simple_name && ofa.classes[c].chain.size() == 1) {
          *out = ClassRef{f, c};
          return true;
        }
      }
    }
  }
  return false;
}

std::vector<int> CallResolver::lookup_with_inheritance(ClassRef ref, const std::string& name,
                                                       int n_args) const {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (int guard = 0; guard < 64; ++guard) {
    if (!seen.insert({ref.file_idx, ref.class_idx}).second) break;
    std::vector<int> found = methods_in_class(ref, name, n_args);
    if (!found.empty()) return found;
    const ClassInfo& cls = analyzed_->analysis(ref.file_idx).classes[ref.class_idx];
    if (cls.extends_name.empty()) break;
    ClassRef next;
    if (!lookup_chain(split_dotted(cls.extends_name), ref.file_idx, &next)) break;
    ref = next;
  }
  return {};
}

ResolveResult CallResolver::resolve_in_class(ClassRef ref, const std::string& name,
                                             int n_args) const {
  ResolveResult r;
  r.callee_ids = lookup_with_inheritance(ref, name, n_args);
  if (!r.resolved()) r.unresolved_reason = "external";
  return r;
}

ResolveResult CallResolver::resolve(const CallSite& site) const {
  ResolveResult external{{}, "external"};
  ResolveResult unknown{{}, "unknown_receiver"};
  if (site.caller_id < 0 ||
      static_cast<std::size_t>(site.caller_id) >= method_location_.size()) {
    return unknown;
  }
  auto [file_idx, class_idx] = method_location_[static_cast<std::size_t>(site.caller_id)];
  if (class_idx < 0) return unknown;
  ClassRef own{file_idx, static_cast<std::size_t>(class_idx)};
  const FileAnalysis& fa = analyzed_->analysis(file_idx);

  auto resolve_simple_class = [&](const std::string& name, ClassRef* out) {
    return lookup_class(name, file_idx, out);
  };

  switch (site.kind) {
    case ReceiverKind::None: {
      std::vector<int> found = lookup_with_inheritance(own, site.method_name, site.n_args);
      if (!found.empty()) return ResolveResult{std::move(found), ""};
      // Static imports: `import static a.b.C.name;` or `import static a.b.C.*;`
      for (const ImportDecl& imp : fa.imports) {
        if (!imp.is_static) continue;
        std::string holder;
        if (imp.wildcard) {
          holder = imp.qualified;
        } else {
          std::size_t dot = imp.qualified.rfind('.');
          if (dot == std::string::npos) continue;
          if (imp.qualified.substr(dot + 1) != site.method_name) continue;
          holder = imp.qualified.substr(0, dot);
        }
        ClassRef ref;
        if (!lookup_chain(split_dotted(holder), file_idx, &ref)) continue;
        std::vector<int> hit = methods_in_class(ref, site.method_name, site.n_args);
        if (!hit.empty()) return ResolveResult{std::move(hit), ""};
      }
      return external;
    }
    case ReceiverKind::This:
      return resolve_in_class(own, site.method_name, site.n_args);
    case ReceiverKind::Super: {
      const ClassInfo& cls = fa.classes[own.class_idx];
      if (cls.extends_name.empty()) return external;
      ClassRef base;
      if (!lookup_chain(split_dotted(cls.extends_name), file_idx, &base)) return external;
      return resolve_in_class(base, site.method_name, site.n_args);
    }
    case ReceiverKind::ThisCtor: {
      const ClassInfo& cls = fa.classes[own.class_idx];
      std::vector<int> found = methods_in_class(own, cls.name, site.n_args);
      if (found.empty()) return external;
      return ResolveResult{std::move(found), ""};
    }
    case ReceiverKind::SuperCtor: {
      const ClassInfo& cls = fa.classes[own.class_idx];
      if (cls.extends_name.empty()) return external;
      ClassRef base;
      if (!lookup_chain(split_dotted(cls.extends_name), file_idx, &base)) return external;
      const ClassInfo& base_cls = analyzed_->analysis(base.file_idx).classes[base.class_idx];
      std::vector<int> found = methods_in_class(base, base_cls.name, site.n_args);
      if (found.empty()) return external;
      return ResolveResult{std::move(found), ""};
    }
    case ReceiverKind::Literal:
      return external;
    case ReceiverKind::Unknown:
      return unknown;
    case ReceiverKind::NewObject: {
      ClassRef ref;
      if (!lookup_chain(site.receiver_chain, file_idx, &ref)) return external;
      std::vector<int> found = methods_in_class(ref, site.method_name, site.n_args);
      if (found.empty()) return external;  // implicit default constructor
      return ResolveResult{std::move(found), ""};
    }
    case ReceiverKind::Named:
      break;
  }

  const std::vector<std::string>& chain = site.receiver_chain;
  if (chain.empty()) return unknown;

  // Declared type of a variable named `name`, searched nearest-first:
  // preceding locals, parameters, then fields up the extends chain.
  auto variable_type = [&](const std::string& name) -> std::string {
    const MethodInfo& caller =
        fa.methods[method_local_idx_[static_cast<std::size_t>(site.caller_id)]];
    std::string best;
    std::size_t best_tok = 0;
    for (const LocalDecl& d : caller.locals) {
      if (d.name == name && d.tok_index <= site.name_tok &&
          (best.empty() || d.tok_index >= best_tok)) {
        best = d.type_name;
        best_tok = d.tok_index;
      }
    }
    if (!best.empty()) return best;
    ClassRef ref = own;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (int guard = 0; guard < 64; ++guard) {
      if (!seen.insert({ref.file_idx, ref.class_idx}).second) break;
      const ClassInfo& cls = analyzed_->analysis(ref.file_idx).classes[ref.class_idx];
      for (const FieldInfo& fld : cls.fields) {
        if (fld.name == name) return fld.type_name;
      }
      if (cls.extends_name.empty()) break;
      ClassRef next;
      if (!lookup_class(cls.extends_name, ref.file_idx, &next)) break;
      ref = next;
    }
    return "";
  };

  if (chain.size() == 1) {
    std::string t = variable_type(chain[0]);
    if (!t.empty()) {
      ClassRef ref;
      if (!resolve_simple_class(t, &ref)) return external;
      return resolve_in_class(ref, site.method_name, site.n_args);
    }
    ClassRef ref;
    if (resolve_simple_class(chain[0], &ref)) {
      return resolve_in_class(ref, site.method_name, site.n_args);
    }
    return external;
  }

  // Dotted receiver: fully qualified class or Outer.Inner in scope; a
  // variable base means a field-of-field chain whose type is not tracked.
  ClassRef ref;
  if (lookup_chain(chain, file_idx, &ref)) {
    return resolve_in_class(ref, site.method_name, site.n_args);
  }
  if (!variable_type(chain[0]).empty()) return unknown;
  return external;
}

CallGraph build_call_graph(const Corpus& corpus, int threads) {
  AnalyzedCorpus analyzed = AnalyzedCorpus::load(corpus, threads);
  CallResolver resolver(analyzed);

  struct FileResult {
    std::vector<std::pair<int, int>> edges;
    std::map<std::string, long> unresolved;
    long scanned = 0;
    long resolved = 0;
    long nested = 0;
  };
  std::vector<FileResult> per_file(analyzed.n_files());

  parallel_for(analyzed.n_files(), threads, [&](std::size_t f) {
    FileResult& r = per_file[f];
    SiteScan scan = scan_call_sites(analyzed, f);
    r.nested = scan.nested_discarded;
    r.scanned = static_cast<long>(scan.sites.size());
    for (const CallSite& site : scan.sites) {
      ResolveResult res = resolver.resolve(site);
      if (res.resolved()) {
        ++r.resolved;
        for (int callee : res.callee_ids) {
          if (callee != site.caller_id) r.edges.emplace_back(site.caller_id, callee);
        }
      } else {
        ++r.unresolved[res.unresolved_reason];
      }
    }
  });

  CallGraph g;
  g.n_nodes = static_cast<int>(corpus.n_methods());
  for (const FileResult& r : per_file) {
    g.edges.insert(g.edges.end(), r.edges.begin(), r.edges.end());
    for (const auto& [reason, count] : r.unresolved) g.unresolved[reason] += count;
    g.scanned_sites += r.scanned;
    g.resolved_sites += r.resolved;
    g.nested_discarded += r.nested;
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  return g;
}

ClassGraph build_class_graph(const Corpus& corpus) {
  ClassGraph g;
  g.n_nodes = static_cast<int>(corpus.n_methods());
  std::map<std::pair<std::string, std::string>, std::vector<int>> groups;
  for (const MethodRecord& m : corpus.methods) {
    groups[{m.file_path, m.class_name}].push_back(m.method_id);
  }
  for (const auto& [key, ids] : groups) {
    (void)key;
    for (std::size_t a = 0; a < ids.size(); ++a) {
      for (std::size_t b = a + 1; b < ids.size(); ++b) {
        int lo = std::min(ids[a], ids[b]);
        int hi = std::max(ids[a], ids[b]);
        g.edges.emplace_back(lo, hi);
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  return g;
}

}  // namespace ripple
