#include "fixtures.hpp"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <stdexcept>

#include "l4/errors.hpp"
#include "l4/parser.hpp"
#include "l4/typecheck.hpp"
#include "l4/wellformed.hpp"

namespace fixture {

std::string path(const std::string& relative) {
  if (!relative.empty() && relative[0] == '/') return relative;
  return std::string(L4_SOURCE_DIR) + "/" + relative;
}

std::string read(const std::string& relative) { return l4::read_source(path(relative)).text; }

l4::RuleModule module_text(const std::string& text) {
  l4::RuleModule m = l4::parse_module(l4::SourceFile{"test.l4", text});
  for (const auto& d : l4::check_well_formed(m))
    if (d.severity == l4::Diagnostic::Severity::Error) throw l4::InputError(l4::format_diagnostic(d));
  l4::typecheck_module(m);
  return m;
}

l4::RuleModule module_file(const std::string& relative) { return module_text(read(relative)); }

namespace {

Run run_shell(const std::string& cmd) {
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw std::runtime_error("cannot run " + cmd);
  Run r;
  std::array<char, 4096> buf{};
  for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), p)) > 0;) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string command(const std::string& args, const std::string& env) {
  return "cd '" + std::string(L4_SOURCE_DIR) + "' && " + env + " '" + L4C_PATH + "' " + args;
}

}  // namespace

Run l4c(const std::string& args, const std::string& env) {
  return run_shell(command(args, env) + " 2>/dev/null");
}

Run l4c_stderr(const std::string& args, const std::string& env) {
  return run_shell(command(args, env) + " 2>&1 >/dev/null");
}

}  // namespace fixture
