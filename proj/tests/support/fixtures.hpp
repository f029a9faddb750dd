// Loading modules and data files in tests.
#pragma once

#include <string>

#include "l4/ast.hpp"

namespace fixture {

// Relative to the source directory; absolute paths are returned as given.
std::string path(const std::string& relative);
std::string read(const std::string& relative);

// Parses, checks well-formedness and types; throws on any problem.
l4::RuleModule module_text(const std::string& text);
l4::RuleModule module_file(const std::string& relative);

struct Run {
  int exit_code = 0;
  std::string out;
};

// Runs l4c with `args` from the source directory; stderr is discarded.
Run l4c(const std::string& args, const std::string& env = "");
// Same, but captures stderr and discards stdout.
Run l4c_stderr(const std::string& args, const std::string& env = "");

}  // namespace fixture
