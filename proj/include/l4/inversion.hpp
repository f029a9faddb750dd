// Normal form of rules and inversion formulas ∀x̄. P x̄ --> Pre_1 || .. || Pre_k.
#pragma once

#include <string>
#include <vector>

#include "l4/ast.hpp"
#include "l4/typecheck.hpp"

namespace l4 {

// Conclusion is `predicate x1 .. xn` over exactly the distinct params.
struct NormalizedRule {
  std::string name;
  std::vector<Param> params;
  Expr precond = Expr::bool_lit(true);
  std::string predicate;
  std::size_t arity = 0;

  Rule to_rule() const;
};

// Throws TransformError when the conclusion is not an atom.
NormalizedRule normalize_rule(const Signature& sig, const Rule& r);

// Rules of `rules` whose conclusion predicate is p, in order. Derived rules
// are skipped.
std::vector<Rule> rules_for(const std::vector<Rule>& rules, const std::string& p);

Expr inversion_formula(const Signature& sig, const std::vector<Rule>& rules, const std::string& p);

struct Occurrence {
  std::string rule;
  SourceLoc loc;
  // Negations above the occurrence; -1 when the polarity is mixed
  // (equality operand, condition of if, argument of another symbol).
  int negations = 0;
};

struct MonotonicityReport {
  bool monotonic = true;
  std::vector<Occurrence> offending;
};

MonotonicityReport check_syntactic_monotonicity(const std::vector<Rule>& rules,
                                                const std::string& p);

}  // namespace l4
