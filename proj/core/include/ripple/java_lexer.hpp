#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ripple {

enum class TokKind {
  Identifier,  // identifiers and keywords
  Number,      // numeric literals, including hex/binary/float forms
  Str,         // string literal or text block; text holds the unescaped contents
  CharLit,     // character literal; text holds the unescaped contents
  Punct,       // single punctuation/operator character
};

struct JavaToken {
  TokKind kind;
  std::string text;
  int line;           // 1-based line of the token's first character
  std::size_t begin;  // byte offset of the first character (including quotes)
  std::size_t end;    // byte offset one past the last character
};

// Scans Java source into tokens. Comments (line, block, javadoc) are
// dropped entirely. The scanner never fails: any byte sequence yields a
// token stream, which is what keeps extraction total on odd inputs.
std::vector<JavaToken> lex_java(std::string_view source);

// True for words that cannot start a type or receiver ("return", "new", ...).
bool is_java_keyword(std::string_view word);

}  // namespace ripple
