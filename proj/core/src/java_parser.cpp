#include "ripple/java_parser.hpp"

#include <unordered_set>

namespace ripple {

namespace {

const std::unordered_set<std::string_view> kModifiers = {
    "public", "protected", "private", "static",   "final",        "abstract",
    "sealed", "strictfp",  "native",  "volatile", "synchronized", "transient",
    "default"};

const std::unordered_set<std::string_view> kControlWords = {
    "if",    "for",   "while", "switch", "catch", "return", "throw",
    "new",   "assert", "do",   "else",   "try",   "instanceof"};

// Words allowed to start a local-variable or field type.
bool type_head_allowed(std::string_view w) {
  if (!is_java_keyword(w)) return true;
  static const std::unordered_set<std::string_view> kPrimitives = {
      "int", "long", "short", "byte", "char", "boolean", "float", "double", "var", "void"};
  return kPrimitives.count(w) > 0;
}

class Parser {
public:
  explicit Parser(std::string_view source) {
    out_.tokens = lex_java(source);
    n_ = out_.tokens.size();
  }

  FileAnalysis run() {
    std::size_t i = 0;
    while (i < n_) {
      if (word_at(i, "package")) {
        auto [name, next] = read_qualified(i + 1);
        out_.package_name = name;
        i = skip_past(next, ';');
      } else if (word_at(i, "import")) {
        i = parse_import(i + 1);
      } else if (is_punct(i, '@') && word_at(i + 1, "interface")) {
        i = skip_annotation_type(i);
      } else {
        std::size_t next = try_type_decl(i, {});
        i = (next > i) ? next : i + 1;
      }
    }
    return std::move(out_);
  }

private:
  FileAnalysis out_;
  std::size_t n_ = 0;

  const JavaToken& tok(std::size_t i) const { return out_.tokens[i]; }
  bool is_punct(std::size_t i, char c) const {
    return i < n_ && tok(i).kind == TokKind::Punct && tok(i).text[0] == c;
  }
  bool is_ident(std::size_t i) const { return i < n_ && tok(i).kind == TokKind::Identifier; }
  bool word_at(std::size_t i, std::string_view w) const {
    return is_ident(i) && tok(i).text == w;
  }

  // Reads a dotted name starting at i; returns (joined text, next index).
  std::pair<std::string, std::size_t> read_qualified(std::size_t i) const {
    std::string name;
    while (is_ident(i)) {
      if (!name.empty()) name.push_back('.');
      name += tok(i).text;
      if (is_punct(i + 1, '.') && is_ident(i + 2)) {
        i += 2;
      } else {
        ++i;
        break;
      }
    }
    return {name, i};
  }

  std::size_t skip_past(std::size_t i, char c) const {
    while (i < n_ && !is_punct(i, c)) ++i;
    return i < n_ ? i + 1 : n_;
  }

  // i at an opening bracket; returns index one past the matching close.
  std::size_t skip_balanced(std::size_t i, char open, char close) {
    int depth = 0;
    while (i < n_) {
      if (is_punct(i, open)) ++depth;
      else if (is_punct(i, close)) {
        --depth;
        if (depth == 0) return i + 1;
      }
      ++i;
    }
    out_.lexical_fallback = true;
    return n_;
  }

  // i at '<' in a type context; returns index past the matching '>'.
  std::size_t skip_generic(std::size_t i) const {
    int depth = 0;
    while (i < n_) {
      if (is_punct(i, '<')) ++depth;
      else if (is_punct(i, '>')) {
        --depth;
        if (depth == 0) return i + 1;
      }
      ++i;
    }
    return n_;
  }

  // '@' Name ('.' Name)* ('(' ... ')')?
  std::size_t skip_annotation(std::size_t i) {
    ++i;  // '@'
    auto [name, next] = read_qualified(i);
    (void)name;
    i = next;
    if (is_punct(i, '(')) i = skip_balanced(i, '(', ')');
    return i;
  }

  // '@interface Name { ... }' — members are annotation elements, skipped.
  std::size_t skip_annotation_type(std::size_t i) {
    while (i < n_ && !is_punct(i, '{')) ++i;
    if (i >= n_) return n_;
    return skip_balanced(i, '{', '}');
  }

  std::size_t skip_modifiers_and_annotations(std::size_t i) {
    for (;;) {
      if (is_punct(i, '@') && !word_at(i + 1, "interface")) {
        i = skip_annotation(i);
      } else if (is_ident(i) && kModifiers.count(tok(i).text)) {
        ++i;
      } else if (word_at(i, "non") && is_punct(i + 1, '-') && word_at(i + 2, "sealed")) {
        i += 3;
      } else {
        return i;
      }
    }
  }

  // Attempts a class/interface/enum/record declaration at i (modifiers
  // allowed). Returns the index past the declaration, or i when it is not
  // a type declaration.
  std::size_t try_type_decl(std::size_t i, const std::vector<std::string>& enclosing) {
    std::size_t j = skip_modifiers_and_annotations(i);
    bool is_interface = false, is_enum = false;
    if (word_at(j, "class") || word_at(j, "record")) {
      // fall through
    } else if (word_at(j, "interface")) {
      is_interface = true;
    } else if (word_at(j, "enum")) {
      is_enum = true;
    } else {
      return i;
    }
    bool is_record = word_at(j, "record");
    ++j;
    if (!is_ident(j)) return i;

    ClassInfo info;
    info.name = tok(j).text;
    info.chain = enclosing;
    info.chain.push_back(info.name);
    info.is_interface = is_interface;
    info.is_enum = is_enum;
    ++j;
    if (is_punct(j, '<')) j = skip_generic(j);
    if (is_record && is_punct(j, '(')) j = skip_balanced(j, '(', ')');

    while (j < n_ && !is_punct(j, '{')) {
      if (word_at(j, "extends")) {
        auto [name, next] = read_qualified(j + 1);
        if (!is_interface && info.extends_name.empty()) info.extends_name = name;
        j = next;
        if (is_punct(j, '<')) j = skip_generic(j);
      } else if (is_punct(j, '<')) {
        j = skip_generic(j);
      } else {
        ++j;
      }
    }
    if (j >= n_) {
      out_.lexical_fallback = true;
      return n_;
    }
    int class_index = static_cast<int>(out_.classes.size());
    out_.classes.push_back(std::move(info));
    return parse_class_body(j, class_index);
  }

  // i at the '{' of a class body.
  std::size_t parse_class_body(std::size_t i, int class_index) {
    std::size_t body_close = skip_balanced(i, '{', '}');  // sentinel for recovery
    ++i;
    if (out_.classes[static_cast<std::size_t>(class_index)].is_enum) {
      i = skip_enum_constants(i);
    }
    while (i < n_ && i < body_close) {
      if (is_punct(i, '}')) return i + 1;
      if (is_punct(i, ';')) {
        ++i;
        continue;
      }
      i = parse_member(i, class_index);
    }
    return body_close;
  }

  // Enum constants run until the first top-level ';' (or the class close).
  std::size_t skip_enum_constants(std::size_t i) {
    while (i < n_) {
      if (is_punct(i, ';')) return i + 1;
      if (is_punct(i, '}')) return i;
      if (is_punct(i, '@')) {
        i = skip_annotation(i);
      } else if (is_punct(i, '(')) {
        i = skip_balanced(i, '(', ')');
      } else if (is_punct(i, '{')) {
        i = skip_balanced(i, '{', '}');
      } else {
        ++i;
      }
    }
    return n_;
  }

  std::size_t parse_member(std::size_t i, int class_index) {
    std::size_t member_first = i;
    std::size_t j = skip_modifiers_and_annotations(i);

    // Nested type declaration.
    if (word_at(j, "class") || word_at(j, "interface") || word_at(j, "enum") ||
        (word_at(j, "record") && is_ident(j + 1) &&
         (is_punct(j + 2, '(') || is_punct(j + 2, '<')))) {
      std::size_t next = try_type_decl(
          member_first, out_.classes[static_cast<std::size_t>(class_index)].chain);
      if (next > member_first) return next;
    }
    if (is_punct(j, '@') && word_at(j + 1, "interface")) return skip_annotation_type(j);

    // Instance or static initializer block.
    if (is_punct(j, '{')) return skip_balanced(j, '{', '}');

    // Walk the member header to decide between field and method.
    int generic_depth = 0;
    std::size_t k = j;
    while (k < n_) {
      if (is_punct(k, '<')) {
        ++generic_depth;
      } else if (is_punct(k, '>')) {
        if (generic_depth > 0) --generic_depth;
      } else if (generic_depth == 0 && is_punct(k, '(')) {
        if (is_ident(k - 1) && !kControlWords.count(tok(k - 1).text)) {
          return parse_method(member_first, k - 1, k, class_index);
        }
        return skip_statementish(k);
      } else if (generic_depth == 0 && (is_punct(k, '=') || is_punct(k, ';'))) {
        record_field(j, k, class_index);
        return is_punct(k, ';') ? k + 1 : skip_statementish(k);
      } else if (generic_depth == 0 && is_punct(k, '{')) {
        return skip_balanced(k, '{', '}');
      }
      ++k;
    }
    return n_;
  }

  // Skips a field initializer or unrecognized member to its ';' at top
  // nesting, balancing parens/braces/brackets on the way.
  std::size_t skip_statementish(std::size_t i) {
    while (i < n_) {
      if (is_punct(i, '(')) i = skip_balanced(i, '(', ')');
      else if (is_punct(i, '{')) i = skip_balanced(i, '{', '}');
      else if (is_punct(i, '[')) i = skip_balanced(i, '[', ']');
      else if (is_punct(i, ';')) return i + 1;
      else if (is_punct(i, '}')) return i;  // malformed member, let caller close
      else ++i;
    }
    return n_;
  }

  // Walks backwards from idx over array brackets and generic arguments to
  // the base type identifier; returns its last segment.
  std::string type_base_before(std::size_t idx) const {
    std::size_t k = idx;
    for (;;) {
      if (k == 0) return "";
      if (is_punct(k, ']')) {
        int depth = 0;
        while (k > 0) {
          if (is_punct(k, ']')) ++depth;
          else if (is_punct(k, '[')) {
            --depth;
            if (depth == 0) break;
          }
          --k;
        }
        if (k == 0) return "";
        --k;
      } else if (is_punct(k, '>')) {
        int depth = 0;
        while (k > 0) {
          if (is_punct(k, '>')) ++depth;
          else if (is_punct(k, '<')) {
            --depth;
            if (depth == 0) break;
          }
          --k;
        }
        if (k == 0) return "";
        --k;
      } else if (is_punct(k, '.')) {
        --k;
      } else {
        break;
      }
    }
    return is_ident(k) ? tok(k).text : "";
  }

  void record_field(std::size_t header_start, std::size_t stop, int class_index) {
    // Pattern "Type name [= ...]": name is the identifier right before stop.
    if (stop == 0 || !is_ident(stop - 1)) return;
    std::size_t name_idx = stop - 1;
    if (name_idx <= header_start) return;
    std::string type = type_base_before(name_idx - 1);
    if (type.empty() || !type_head_allowed(type)) return;
    auto& cls = out_.classes[static_cast<std::size_t>(class_index)];
    cls.fields.push_back(FieldInfo{tok(name_idx).text, type});
  }

  std::size_t parse_method(std::size_t member_first, std::size_t name_idx,
                           std::size_t paren_idx, int class_index) {
    MethodInfo m;
    m.name = tok(name_idx).text;
    m.first_tok = member_first;
    m.start_line = tok(member_first).line;
    m.class_index = class_index;

    std::size_t i = parse_params(paren_idx, m);

    // throws clause, trailing annotations.
    for (;;) {
      if (word_at(i, "throws")) {
        ++i;
        while (i < n_ && !is_punct(i, '{') && !is_punct(i, ';') && !is_punct(i, '@')) {
          if (is_punct(i, '<')) i = skip_generic(i);
          else ++i;
        }
      } else if (is_punct(i, '@')) {
        i = skip_annotation(i);
      } else {
        break;
      }
    }

    std::size_t end;
    if (is_punct(i, '{')) {
      m.has_body = true;
      m.body_begin = i;
      end = skip_balanced(i, '{', '}');
      m.body_end = end > 0 ? end - 1 : i;
      m.last_tok = m.body_end;
      collect_locals(m);
    } else if (is_punct(i, ';')) {
      m.last_tok = i;
      end = i + 1;
    } else if (word_at(i, "default")) {
      // Annotation element with a default value.
      end = skip_statementish(i);
      m.last_tok = end > 0 ? end - 1 : i;
    } else {
      end = skip_statementish(i);
      m.last_tok = (end > member_first && end <= n_) ? end - 1 : member_first;
    }
    if (m.last_tok >= n_) m.last_tok = n_ - 1;
    m.end_line = tok(m.last_tok).line;
    out_.methods.push_back(std::move(m));
    return end;
  }

  // i at '('; fills n_args/params; returns index past ')'.
  std::size_t parse_params(std::size_t i, MethodInfo& m) {
    std::size_t close = skip_balanced(i, '(', ')');
    std::size_t body_start = i + 1;
    std::size_t body_stop = close > 0 ? close - 1 : i;  // index of ')'

    int paren = 0, bracket = 0, generic = 0;
    std::size_t slice_start = body_start;
    auto flush = [&](std::size_t slice_end) {
      if (slice_end <= slice_start) return;
      ParamInfo p;
      // Name: last identifier of the slice.
      std::size_t name_idx = slice_end;
      while (name_idx > slice_start) {
        --name_idx;
        if (is_ident(name_idx)) break;
      }
      if (!is_ident(name_idx)) return;
      p.name = tok(name_idx).text;
      if (name_idx > slice_start) {
        std::size_t t = name_idx - 1;
        while (t > slice_start && is_punct(t, '.')) --t;  // varargs dots
        p.type_name = type_base_before(t);
      }
      m.params.push_back(std::move(p));
    };
    for (std::size_t k = body_start; k < body_stop; ++k) {
      if (is_punct(k, '(')) ++paren;
      else if (is_punct(k, ')')) --paren;
      else if (is_punct(k, '[')) ++bracket;
      else if (is_punct(k, ']')) --bracket;
      else if (is_punct(k, '<')) ++generic;
      else if (is_punct(k, '>')) { if (generic > 0) --generic; }
      else if (is_punct(k, ',') && paren == 0 && bracket == 0 && generic == 0) {
        flush(k);
        slice_start = k + 1;
      }
    }
    flush(body_stop);
    m.n_args = static_cast<int>(m.params.size());
    return close;
  }

  // Scans a method body for "Type name (= | ; | : | ,)" declarations.
  void collect_locals(MethodInfo& m) {
    for (const auto& p : m.params) {
      if (!p.type_name.empty()) {
        m.locals.push_back(LocalDecl{m.body_begin, p.name, p.type_name});
      }
    }
    if (!m.has_body) return;
    bool boundary = true;
    std::size_t k = m.body_begin + 1;
    while (k < m.body_end) {
      if (tok(k).kind == TokKind::Punct) {
        char c = tok(k).text[0];
        boundary = (c == ';' || c == '{' || c == '}' || c == '(' || c == ',' || c == ')');
        ++k;
        continue;
      }
      if (boundary && word_at(k, "final")) {
        ++k;
        continue;
      }
      if (boundary && is_ident(k) && type_head_allowed(tok(k).text)) {
        std::size_t match_end = match_local_decl(k, m.body_end, m);
        if (match_end > k) {
          k = match_end;
          boundary = false;
          continue;
        }
      }
      boundary = false;
      ++k;
    }
  }

  // Attempts to match a declaration starting at k. On success records the
  // local on the enclosing method and returns the index past the name.
  std::size_t match_local_decl(std::size_t k, std::size_t limit, MethodInfo& m) {
    std::size_t j = k;
    std::string base = tok(j).text;
    while (is_punct(j + 1, '.') && is_ident(j + 2)) {
      j += 2;
      base = tok(j).text;
    }
    ++j;
    if (j < limit && is_punct(j, '<')) {
      std::size_t g = skip_typeish_generic(j, limit);
      if (g == 0) return k;
      j = g;
    }
    while (j + 1 < limit && is_punct(j, '[') && is_punct(j + 1, ']')) j += 2;
    if (j >= limit || !is_ident(j) || is_java_keyword(tok(j).text)) return k;
    std::size_t name_idx = j;
    std::size_t after = j + 1;
    if (after >= limit) return k;
    if (!(is_punct(after, '=') || is_punct(after, ';') || is_punct(after, ':') ||
          is_punct(after, ','))) {
      return k;
    }
    if (is_punct(after, '=') && is_punct(after + 1, '=')) return k;  // '==' comparison
    m.locals.push_back(LocalDecl{k, tok(name_idx).text, base});
    return name_idx + 1;
  }

  // Balanced '<...>' accepting only tokens that can occur in a type
  // argument list; returns 0 when the run is not type-like (comparison).
  std::size_t skip_typeish_generic(std::size_t i, std::size_t limit) const {
    int depth = 0;
    std::size_t k = i;
    while (k < limit) {
      const JavaToken& t = tok(k);
      if (t.kind == TokKind::Punct) {
        char c = t.text[0];
        if (c == '<') ++depth;
        else if (c == '>') {
          --depth;
          if (depth == 0) return k + 1;
        } else if (c != '.' && c != ',' && c != '?' && c != '[' && c != ']' && c != '&') {
          return 0;
        }
      } else if (t.kind == TokKind::Identifier) {
        if (is_java_keyword(t.text) && t.text != "extends" && t.text != "super" &&
            !type_head_allowed(t.text)) {
          return 0;
        }
      } else {
        return 0;
      }
      ++k;
    }
    return 0;
  }

  // Imports: 'import' ('static')? Qualified ('.' '*')? ';'
  std::size_t parse_import(std::size_t i) {
    ImportDecl decl;
    if (word_at(i, "static")) {
      decl.is_static = true;
      ++i;
    }
    auto [name, next] = read_qualified(i);
    decl.qualified = name;
    i = next;
    if (is_punct(i, '.') && is_punct(i + 1, '*')) {
      decl.wildcard = true;
      i += 2;
    } else if (is_punct(i, '*')) {
      decl.wildcard = true;
      ++i;
    }
    if (!decl.qualified.empty()) out_.imports.push_back(std::move(decl));
    return skip_past(i, ';');
  }
};

}  // namespace

FileAnalysis analyze_java_file(std::string_view source) {
  return Parser(source).run();
}

}  // namespace ripple
