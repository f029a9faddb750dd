// Reference implementations used to cross-check the library. Each one is
// written against the definitions directly and shares no code with the
// component it checks.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "l4/asp.hpp"
#include "l4/ast.hpp"

namespace oracle {

// Quantifier-free Boolean expressions: every maximal non-connective
// subterm is an atom, keyed by its printed form.
std::vector<std::string> prop_atoms(const l4::Expr& e);
bool prop_eval(const l4::Expr& e, const std::map<std::string, bool>& val);

// All assignments over `atoms` in binary counting order, first atom most
// significant.
std::vector<std::map<std::string, bool>> assignments(const std::vector<std::string>& atoms);

// a ⟺ b on every assignment satisfying `theory` (pairs (x, y) meaning x ⇒ y).
bool equivalent_under(const l4::Expr& a, const l4::Expr& b,
                      const std::vector<std::pair<std::string, std::string>>& theory);

bool has_cycle(const std::set<std::pair<std::string, std::string>>& edges);

// Sign of each occurrence of predicate p: +1 positive, -1 negative, 0 when
// the occurrence is neither (argument position, equality, if-condition).
std::vector<int> occurrence_signs(const l4::Expr& e, const std::string& p);

// Ground normal program over string atoms.
struct GRule {
  std::string head;
  std::vector<std::string> pos;
  std::vector<std::string> neg;
};

std::vector<GRule> to_grules(const l4::asp::AspProgram& p);
std::set<std::string> program_atoms(const std::vector<GRule>& p);
// Stable models by enumerating every subset of the atoms.
std::vector<std::set<std::string>> stable_models(const std::vector<GRule>& p);
// Subset-minimal classical models of a negation-free program.
std::vector<std::set<std::string>> minimal_models(const std::vector<GRule>& p);

// Legal models over the full candidate space: every subset of is_legal atoms
// (atoms occurring in c) and legally_valid pairs (one per rule).
std::optional<std::string> legal_violation(const l4::asp::Config& c, const l4::asp::LegalModel& s);
std::vector<l4::asp::LegalModel> legal_models(const l4::asp::Config& c);

}  // namespace oracle
