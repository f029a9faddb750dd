// Concrete-syntax printer. Output re-parses to an equal AST.
#pragma once

#include <string>

#include "l4/ast.hpp"

namespace l4 {

std::string print_type(const LType& t);
std::string print_expr(const Expr& e);
std::string print_annotation(const RuleAnnotation& a);
std::string print_rule(const Rule& r);
std::string print_assertion(const Assertion& a);
std::string print_module(const RuleModule& m);

}  // namespace l4
