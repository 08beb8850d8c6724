#include "ripple/java_lexer.hpp"

#include <cctype>
#include <unordered_set>

namespace ripple {

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool ident_part(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
         static_cast<unsigned char>(c) >= 0x80;
}

// Decodes one escape sequence starting at s[i] == '\\'. Appends the decoded
// character(s) to out and returns the index one past the sequence.
std::size_t decode_escape(std::string_view s, std::size_t i, std::string& out) {
  ++i;  // consume backslash
  if (i >= s.size()) return i;
  char c = s[i];
  switch (c) {
    case 'n': out.push_back('\n'); return i + 1;
    case 't': out.push_back('\t'); return i + 1;
    case 'r': out.push_back('\r'); return i + 1;
    case 'b': out.push_back('\b'); return i + 1;
    case 'f': out.push_back('\f'); return i + 1;
    case 's': out.push_back(' '); return i + 1;
    case '0': out.push_back('\0'); return i + 1;
    case 'u': {
      // \uXXXX: skip the hex digits; non-ASCII payloads carry no subtokens.
      std::size_t j = i + 1;
      while (j < s.size() && s[j] == 'u') ++j;
      std::size_t digits = 0;
      while (j < s.size() && digits < 4 && std::isxdigit(static_cast<unsigned char>(s[j]))) {
        ++j;
        ++digits;
      }
      return j;
    }
    default: out.push_back(c); return i + 1;
  }
}

}  // namespace

bool is_java_keyword(std::string_view word) {
  static const std::unordered_set<std::string_view> kKeywords = {
      "abstract", "assert",   "break",      "case",     "catch",   "const",
      "continue", "default",  "do",         "else",     "enum",    "extends",
      "final",    "finally",  "for",        "goto",     "if",      "implements",
      "import",   "instanceof", "interface", "native",  "new",     "package",
      "private",  "protected", "public",    "return",   "static",  "strictfp",
      "super",    "switch",   "synchronized", "this",   "throw",   "throws",
      "transient", "try",     "volatile",   "while",    "yield",   "record",
      "sealed",   "permits",  "var",        "class",    "void",    "boolean",
      "byte",     "char",     "short",      "int",      "long",    "float",
      "double",   "true",     "false",      "null"};
  return kKeywords.count(word) > 0;
}

std::vector<JavaToken> lex_java(std::string_view src) {
  std::vector<JavaToken> toks;
  toks.reserve(src.size() / 4 + 8);
  std::size_t i = 0;
  int line = 1;
  auto push = [&](TokKind kind, std::string text, std::size_t begin, std::size_t end, int tok_line) {
    toks.push_back(JavaToken{kind, std::move(text), tok_line, begin, end});
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    // Comments.
    if (c == '/' && i + 1 < src.size()) {
      if (src[i + 1] == '/') {
        i += 2;
        while (i < src.size() && src[i] != '\n') ++i;
        continue;
      }
      if (src[i + 1] == '*') {
        i += 2;
        while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) {
          if (src[i] == '\n') ++line;
          ++i;
        }
        i = (i + 1 < src.size()) ? i + 2 : src.size();
        continue;
      }
    }
    // Text blocks and string literals.
    if (c == '"') {
      std::size_t begin = i;
      int tok_line = line;
      std::string text;
      if (src.substr(i, 3) == "\"\"\"") {
        i += 3;
        while (i < src.size() && src.substr(i, 3) != "\"\"\"") {
          if (src[i] == '\\') {
            i = decode_escape(src, i, text);
          } else {
            if (src[i] == '\n') ++line;
            text.push_back(src[i]);
            ++i;
          }
        }
        i = (i < src.size()) ? i + 3 : src.size();
      } else {
        ++i;
        while (i < src.size() && src[i] != '"' && src[i] != '\n') {
          if (src[i] == '\\') {
            i = decode_escape(src, i, text);
          } else {
            text.push_back(src[i]);
            ++i;
          }
        }
        if (i < src.size() && src[i] == '"') ++i;
      }
      push(TokKind::Str, std::move(text), begin, i, tok_line);
      continue;
    }
    // Character literals.
    if (c == '\'') {
      std::size_t begin = i;
      int tok_line = line;
      std::string text;
      ++i;
      while (i < src.size() && src[i] != '\'' && src[i] != '\n') {
        if (src[i] == '\\') {
          i = decode_escape(src, i, text);
        } else {
          text.push_back(src[i]);
          ++i;
        }
      }
      if (i < src.size() && src[i] == '\'') ++i;
      push(TokKind::CharLit, std::move(text), begin, i, tok_line);
      continue;
    }
    // Numbers. A leading digit consumes the alphanumeric run plus '.' in
    // float forms and '_' separators; precise literal grammar is not needed.
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t begin = i;
      int tok_line = line;
      std::size_t j = i;
      while (j < src.size()) {
        char d = src[j];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_') {
          ++j;
        } else if (d == '.' && j + 1 < src.size() &&
                   std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
          ++j;
        } else if ((d == '+' || d == '-') && j > begin &&
                   (src[j - 1] == 'e' || src[j - 1] == 'E') &&
                   !src.substr(begin, 2).starts_with("0x") &&
                   !src.substr(begin, 2).starts_with("0X")) {
          ++j;  // exponent sign
        } else {
          break;
        }
      }
      push(TokKind::Number, std::string(src.substr(begin, j - begin)), begin, j, tok_line);
      i = j;
      continue;
    }
    // Identifiers and keywords.
    if (ident_start(c)) {
      std::size_t begin = i;
      int tok_line = line;
      std::size_t j = i;
      while (j < src.size() && ident_part(src[j])) ++j;
      push(TokKind::Identifier, std::string(src.substr(begin, j - begin)), begin, j, tok_line);
      i = j;
      continue;
    }
    // Everything else: one punct character per token.
    push(TokKind::Punct, std::string(1, c), i, i + 1, line);
    ++i;
  }
  return toks;
}

}  // namespace ripple
