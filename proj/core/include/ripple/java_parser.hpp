#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ripple/java_lexer.hpp"

namespace ripple {

struct ImportDecl {
  std::string qualified;  // "a.b.C" or "a.b" for wildcard imports
  bool wildcard = false;
  bool is_static = false;
};

struct ParamInfo {
  std::string type_name;  // last segment of the declared type, "" if unknown
  std::string name;
};

struct FieldInfo {
  std::string name;
  std::string type_name;
};

struct LocalDecl {
  std::size_t tok_index;  // position of the declaration in the token stream
  std::string name;
  std::string type_name;
};

struct ClassInfo {
  std::string name;
  std::vector<std::string> chain;  // enclosing names outermost first, self last
  std::string extends_name;        // possibly dotted; "" when absent
  bool is_interface = false;
  bool is_enum = false;
  std::vector<FieldInfo> fields;
};

struct MethodInfo {
  std::string name;
  int n_args = 0;
  int start_line = 1;
  int end_line = 1;
  std::size_t first_tok = 0;  // member start, including modifiers/annotations
  std::size_t last_tok = 0;   // closing '}' or ';'
  bool has_body = false;
  std::size_t body_begin = 0;  // index of '{' when has_body
  std::size_t body_end = 0;    // index of matching '}'
  std::vector<ParamInfo> params;
  std::vector<LocalDecl> locals;  // body declarations, in token order
  int class_index = -1;           // -1 for methods outside any class
};

// One pass over a single .java source: package, imports, class nesting,
// and method boundaries. Tolerant by construction — anything that does not
// match a declaration pattern is skipped, so malformed files degrade to
// whatever can still be recognized lexically.
struct FileAnalysis {
  std::string package_name;
  std::vector<ImportDecl> imports;
  std::vector<ClassInfo> classes;
  std::vector<MethodInfo> methods;  // ordered by first_tok
  std::vector<JavaToken> tokens;
  bool lexical_fallback = false;  // set when brace structure was unbalanced
};

FileAnalysis analyze_java_file(std::string_view source);

}  // namespace ripple
