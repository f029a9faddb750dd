// Elimination of rule modifiers by rewriting.
//
// despite r2 on r1      => r2 subjectTo r1
// r subjectTo [o..]     => r'Orig {source} + r {derived: restrictSubjectTo r'Orig [o..]}
// derived rules are then evaluated in dependency order, either by conjoining
// negated preconditions of the overriders or, after lifting every concluded
// predicate P to P⁺ with a rule-name argument, their negated conclusions.
#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "l4/ast.hpp"
#include "l4/typecheck.hpp"

namespace l4 {

enum class RestrictionVariant { ViaPrecondition, ViaDerivability };

const char* variant_name(RestrictionVariant v);

struct RuleOrder {
  // (r, r'): r appears in the defining expression of r'.
  std::set<std::pair<std::string, std::string>> edges;
  std::vector<std::string> sequence;
};

inline constexpr const char* kOrigSuffix = "'Orig";

std::vector<Rule> despite_elim(const std::vector<Rule>& rules);
std::vector<Rule> subject_to_elim(const std::vector<Rule>& rules);

// Topological order with lexicographic tie-breaking. Throws CycleError.
RuleOrder rule_order(const std::vector<Rule>& rules);

// Throws InterfaceMismatch when the parameter interfaces differ.
Rule restrict_subject_to_precond(const Rule& r1, const std::vector<Rule>& overriders);
Rule restrict_subject_to_deriv(const Rule& r1, const std::vector<Rule>& overriders);

Rule remap(const Signature& sig, const Rule& r, const std::vector<Param>& new_params,
           const std::vector<std::pair<std::string, Expr>>& subst);

// Name of P⁺ and of its rule-name class.
std::string lifted_name(const std::string& p);
std::string rulename_class(const std::string& p);

// Predicates occurring in conclusions of non-system rules.
std::vector<std::string> transformable_predicates(const std::vector<Rule>& rules);

// Lifts every transformable predicate. Works on modules before or after
// subject_to_elim: a source rule r'Orig concludes with the name of r.
RuleModule lift_predicates(const RuleModule& m);

// Resolves every derived rule; source rules are dropped, the rest keep their
// position.
std::vector<Rule> eval_derived(const Signature& sig, const std::vector<Rule>& rules,
                               RestrictionVariant variant);

// Best-effort equivalence-preserving cleanup of a formula modulo
// inclusions isC x ⇒ isB x.
Expr simplify(const Expr& f, const std::set<std::pair<std::string, std::string>>& inclusions);

struct PipelineStage {
  std::string name;
  std::vector<Rule> rules;
};

struct PipelineResult {
  RuleModule module;
  RuleOrder order;
  std::vector<PipelineStage> trace;
};

struct PipelineOptions {
  RestrictionVariant variant = RestrictionVariant::ViaPrecondition;
  bool simplify = false;
};

// despite_elim, subject_to_elim, rule_order, [lift], eval_derived,
// [simplify] over the user rules of m. System rules pass through unchanged.
PipelineResult run_pipeline(const RuleModule& m, const PipelineOptions& opts);

}  // namespace l4
