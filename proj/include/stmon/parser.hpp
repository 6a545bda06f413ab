#pragma once

#include <cstddef>

#include "stmon/types.hpp"

namespace stmon {

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg), position(pos) {}
};

// Options for the textual session-type language:
//
//   type := "end"
//         | "rec" IDENT "." type
//         | IDENT                                    (recursion variable)
//         | "+" "{" ROLE "!" LABEL "(" SORT ")" "." type {"," ...} "}"
//         | ROLE "&" "{" LABEL "(" SORT ")" "." type {"," ...} "}"
//
// Singleton choices may omit the braces and the leading "+":
//   q!a(int).end        p&a(int).end
// "//" starts a comment running to end of line.
struct ParseOptions {
  // Sort atoms accepted by the parser. Empty set = accept any identifier.
  std::set<Sort> sorts = {"int", "str", "bool", "float"};
};

// Parses and validates (closed, guarded, distinct labels). Throws ParseError
// on syntax/sort errors and ValidationError on invariant violations.
TypePtr parse_session_type(const std::string& text, const ParseOptions& opts = {});

}  // namespace stmon
