#pragma once

#include <string>

#include "l4/ast.hpp"

namespace l4 {

struct SourceFile {
  std::string path;
  std::string text;
};

// Parses an `.l4` module. Throws SyntaxError on the first error.
RuleModule parse_module(const SourceFile& src);

// Parses a single expression (used by tests and the CLI).
Expr parse_expr(const std::string& text);

LType parse_type(const std::string& text);

SourceFile read_source(const std::string& path);

}  // namespace l4
