#pragma once

#include <string>
#include <vector>

#include "l4/ast.hpp"

namespace l4 {

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  SourceLoc loc;
  std::string message;

  friend bool operator==(const Diagnostic& a, const Diagnostic& b) {
    return a.severity == b.severity && a.loc.line == b.loc.line && a.loc.col == b.loc.col &&
           a.message == b.message;
  }
};

// Structural checks that do not need types: name uniqueness, resolution of
// every referenced name, free variables, acyclic class tree. Never throws.
// Result is ordered by source position.
std::vector<Diagnostic> check_well_formed(const RuleModule& m);

std::string format_diagnostic(const Diagnostic& d);

}  // namespace l4
