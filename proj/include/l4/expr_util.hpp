// Structural helpers over expressions: free variables, capture-avoiding
// substitution, application spines.
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "l4/ast.hpp"

namespace l4 {

// Names occurring free in e. Declared symbols are names too; callers filter.
std::set<std::string> free_names(const Expr& e);

// Every name occurring in e, free or bound.
std::set<std::string> all_names(const Expr& e);

// Simultaneous capture-avoiding substitution of free occurrences.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& subst);

Expr rename(const Expr& e, const std::map<std::string, std::string>& renaming);

// Replaces applications of lambdas by their bodies, innermost first.
Expr beta_reduce(const Expr& e);

struct Spine {
  Expr head;
  std::vector<Expr> args;
};

// f a1 .. an -> {f, [a1..an]}. Non-applications give an empty argument list.
Spine flatten_app(const Expr& e);

// Predicate name of an atom `P e1 .. en`, or empty when e is not an
// application of a named symbol.
std::string atom_predicate(const Expr& e);

// Splits nested && into its conjuncts in left-to-right order.
std::vector<Expr> conjuncts(const Expr& e);

// A name based on `base` that is not in `taken`.
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);

}  // namespace l4
