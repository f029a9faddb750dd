// Class hierarchy, symbol table, subtyping and expression typing.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "l4/ast.hpp"

namespace l4 {

// Declared and generated symbols of a module together with its class tree.
//
// Characteristic predicates `isC : S -> Boolean` and attribute selectors
// `f : C -> T` are always visible here, whether or not the module has been
// elaborated. Members of enumerated classes are constants of that class.
class Signature {
 public:
  Signature() = default;
  // Throws NameError on unresolved parents or a cyclic parent chain.
  explicit Signature(const RuleModule& m);

  bool has_class(const std::string& c) const { return parent_.count(c) > 0; }
  // Classes in declaration order.
  const std::vector<std::string>& classes() const { return class_order_; }
  const std::string& parent(const std::string& c) const;
  // The sort (immediate subclass of Class) that c belongs to.
  const std::string& sort_of(const std::string& c) const;
  bool is_sort(const std::string& c) const;
  std::vector<std::string> sorts() const;
  bool is_enum(const std::string& c) const;
  const std::vector<std::string>& members(const std::string& c) const;
  // Attributes declared directly on c.
  const std::vector<Param>& attributes(const std::string& c) const;

  // c ⪯ b along the parent chain; every class is below `Class`.
  bool subclass(const std::string& c, const std::string& b) const;
  // Throws NameError when either side mentions an unknown class.
  bool subtype(const LType& a, const LType& b) const;
  // Every class name in t resolves.
  void check_type(const LType& t, SourceLoc loc = {}) const;

  const LType* symbol(const std::string& name) const;
  bool is_symbol(const std::string& name) const { return symbol(name) != nullptr; }
  // Symbols in a fixed order: user decls, globals, generated, enum members.
  const std::vector<std::string>& symbol_order() const { return symbol_order_; }
  bool is_generated(const std::string& name) const { return generated_.count(name) > 0; }
  bool is_global(const std::string& name) const { return globals_.count(name) > 0; }
  // Enumerated class owning this constant, if any.
  std::optional<std::string> enum_of(const std::string& constant) const;
  // Class whose characteristic predicate this is.
  std::optional<std::string> characterized_class(const std::string& pred) const;
  // Type of field f looked up from c upwards.
  std::optional<LType> field(const std::string& c, const std::string& f) const;

  // Adds or replaces a symbol (used when transformations introduce new
  // predicates).
  void declare(const std::string& name, const LType& type);
  void add_enum(const std::string& name, std::vector<std::string> members);

 private:
  void add_symbol(const std::string& name, const LType& t, bool generated);

  std::map<std::string, std::string> parent_;
  std::vector<std::string> class_order_;
  std::map<std::string, std::vector<std::string>> members_;
  std::map<std::string, std::vector<Param>> attrs_;
  std::map<std::string, LType> symbols_;
  std::vector<std::string> symbol_order_;
  std::set<std::string> generated_;
  std::set<std::string> globals_;
  std::map<std::string, std::string> enum_of_;
  std::map<std::string, std::string> char_pred_;
};

bool is_builtin_type_name(const std::string& n);

// Name of the characteristic predicate of class c.
std::string char_pred_name(const std::string& c);

// Innermost binding last.
using TypingContext = std::vector<std::pair<std::string, LType>>;

// Least type of e. Throws TypeError or NameError.
LType type_of(const Signature& sig, const TypingContext& ctx, const Expr& e);

// Checks declarations, rule bodies and assertions. Throws on the first error.
void typecheck_module(const RuleModule& m);

// Adds characteristic predicates, attribute selectors and class-inclusion
// rules. Idempotent. Throws NameError when a generated name collides with a
// user declaration of a different type or a user rule.
RuleModule elaborate(const RuleModule& m);

// Name of the generated inclusion rule for `c extends b`.
std::string inclusion_rule_name(const std::string& c, const std::string& b);

// (isC, isB) for every C ⪯ B with B below Class, transitively closed.
std::set<std::pair<std::string, std::string>> inclusion_pairs(const Signature& sig);

}  // namespace l4
