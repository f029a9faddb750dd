// Rules as first-order formulas, a finite-model enumerator used as the
// checking oracle, SMT-LIB emission and the precondition/derivability model
// correspondence check.
#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "l4/ast.hpp"
#include "l4/transform.hpp"
#include "l4/typecheck.hpp"

namespace l4 {

enum class InversionScope {
  None,
  // Predicates concluded by user rules.
  Transformable,
  // Every user-declared predicate, concluded or not (closed world).
  AllPredicates,
};

struct FormulaOptions {
  InversionScope inversions = InversionScope::Transformable;
  // Rules left out of the active rule set (and of the inversion formulas).
  std::vector<std::string> delete_rules;
};

struct Formula {
  // Rule name, `sort:S`, `type:c`, `inv:P` or `assert:A`.
  std::string origin;
  Expr expr;
  // Sort, typing and class-inclusion axioms. The enumerator keeps them only
  // when they share a symbol with the remaining formulas.
  bool background = false;
};

struct FormulaSet {
  Signature sig;
  std::vector<Formula> formulas;
  // Predicates that received an inversion formula.
  std::vector<std::string> inverted;
};

// `m` must be free of rule modifiers (run the transform pipeline first).
FormulaSet rules_to_formulas(const RuleModule& m, const FormulaOptions& opts = {});

// Validates the rule-set adjustment of `a` against m and returns options that
// apply it.
FormulaOptions options_for(const RuleModule& m, const Assertion& a,
                           InversionScope scope = InversionScope::Transformable);

struct Bounds {
  std::map<std::string, int> sizes;
  std::vector<std::int64_t> ints{90, 130, 320};
};

struct SearchOptions {
  std::size_t max_models = std::numeric_limits<std::size_t>::max();
  std::uint64_t node_budget = 200'000'000;
  unsigned threads = 1;
  // Symbols interpreted even when no formula mentions them.
  std::vector<std::string> extra_symbols;
};

using Value = std::variant<bool, std::int64_t, std::string>;

std::string value_text(const Value& v);

struct Interpretation {
  struct Row {
    std::vector<Value> args;
    Value value;
  };
  std::map<std::string, std::vector<std::string>> carriers;
  std::map<std::string, std::vector<Row>> tables;

  // Value of symbol at args; throws std::out_of_range when absent.
  const Value& at(const std::string& symbol, const std::vector<Value>& args = {}) const;
  std::string to_json() const;
};

struct EnumerationResult {
  std::vector<Interpretation> models;
  std::uint64_t nodes = 0;
};

// All interpretations over the given carriers satisfying every formula, in
// a fixed order. Throws ResourceLimit when the node budget runs out.
EnumerationResult enumerate_models(const FormulaSet& fs, const Bounds& bounds,
                                   const SearchOptions& opts = {});

struct AssertionResult {
  enum class Status { Valid, CounterModel, Satisfiable, Unsatisfiable };
  Status status = Status::Valid;
  std::optional<Interpretation> model;
  std::uint64_t nodes = 0;
};

const char* status_text(AssertionResult::Status s);

// Validity: searches a model of fs ∧ ¬A; satisfiability: of fs ∧ A.
AssertionResult check_assertion(const FormulaSet& fs, const Assertion& a, const Bounds& bounds,
                                const SearchOptions& opts = {});

std::string emit_smtlib(const FormulaSet& fs, const Assertion& a);

// Minimal s-expression reader and printer for SMT-LIB scripts.
struct SExpr {
  std::string atom;
  std::vector<SExpr> list;
  bool is_list = false;
  friend bool operator==(const SExpr&, const SExpr&) = default;
};
std::vector<SExpr> parse_sexprs(const std::string& text);
std::string print_sexpr(const SExpr& e);
// One top-level form per line.
std::string print_script(const std::vector<SExpr>& forms);

struct CorrespondenceViolation {
  // "precond->deriv" or "deriv->precond".
  std::string direction;
  std::size_t model_index = 0;
  std::string formula;
  Interpretation source;
  Interpretation constructed;
};

struct CorrespondenceReport {
  std::size_t precond_models = 0;
  std::size_t deriv_models = 0;
  std::vector<CorrespondenceViolation> violations;
  std::uint64_t nodes = 0;
  bool ok() const { return violations.empty(); }
};

// Builds both variants with inversion formulas, maps every model of one to
// an interpretation of the other and checks it.
CorrespondenceReport check_model_correspondence(const RuleModule& annotated, const Bounds& bounds,
                                                const SearchOptions& opts = {});

}  // namespace l4
