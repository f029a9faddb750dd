#include "l4/wellformed.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "l4/errors.hpp"
#include "l4/expr_util.hpp"
#include "l4/typecheck.hpp"

namespace l4 {

namespace {

// First source location of a free occurrence of `name` in e.
SourceLoc find_var(const Expr& e, const std::string& name, SourceLoc fallback) {
  SourceLoc found = fallback;
  bool hit = false;
  std::function<void(const Expr&)> walk = [&](const Expr& x) {
    if (hit) return;
    if (x.is(ExprKind::Var) && x.name() == name) {
      found = x.loc();
      hit = true;
      return;
    }
    if ((x.is(ExprKind::Forall) || x.is(ExprKind::Exists) || x.is(ExprKind::Lambda)) &&
        x.name() == name)
      return;
    for (const auto& k : x.kids()) walk(k);
  };
  walk(e);
  return found;
}

class Checker {
 public:
  explicit Checker(const RuleModule& m) : m_(m) {}

  std::vector<Diagnostic> run() {
    classes();
    declarations();
    rules();
    assertions();
    std::stable_sort(out_.begin(), out_.end(), [](const Diagnostic& a, const Diagnostic& b) {
      return a.loc.before(b.loc);
    });
    return out_;
  }

 private:
  void error(SourceLoc loc, std::string msg) {
    out_.push_back(Diagnostic{Diagnostic::Severity::Error, loc, std::move(msg)});
  }

  void classes() {
    for (const auto& c : m_.classes) {
      if (c.name == kTopClass || is_builtin_type_name(c.name)) {
        error(c.loc, "class name '" + c.name + "' is reserved");
        continue;
      }
      if (!parents_.emplace(c.name, c.parent).second) {
        error(c.loc, "duplicate class name '" + c.name + "'");
        continue;
      }
      symbols_.insert(char_pred_name(c.name));
      for (const auto& mem : c.members) symbols_.insert(mem);
      std::set<std::string> seen;
      for (const auto& a : c.attributes) {
        if (!seen.insert(a.name).second)
          error(c.loc, "duplicate attribute '" + a.name + "' in class " + c.name);
        symbols_.insert(a.name);
      }
    }
    for (const auto& c : m_.classes) {
      if (c.parent == kTopClass) continue;
      if (is_builtin_type_name(c.parent)) {
        error(c.loc, "class '" + c.name + "' cannot extend builtin type " + c.parent);
        continue;
      }
      if (!parents_.count(c.parent)) {
        error(c.loc, "class '" + c.name + "' extends unknown class '" + c.parent + "'");
        continue;
      }
      std::string cur = c.parent;
      for (std::size_t steps = 0; cur != kTopClass && parents_.count(cur); ++steps) {
        if (cur == c.name || steps > parents_.size()) {
          error(c.loc, "class hierarchy has a cycle through '" + c.name + "'");
          break;
        }
        cur = parents_.at(cur);
      }
    }
    for (const auto& c : m_.classes)
      for (const auto& a : c.attributes) check_type(a.type, c.loc);
  }

  void check_type(const LType& t, SourceLoc loc) {
    if (t.is_class()) {
      if (t.name() != kTopClass && !parents_.count(t.name()))
        error(loc, "unknown class '" + t.name() + "'");
      return;
    }
    for (const auto& a : t.args()) check_type(a, loc);
  }

  void declarations() {
    std::set<std::string> seen;
    auto one = [&](const FunDecl& d) {
      if (!seen.insert(d.name).second) error(d.loc, "duplicate declaration '" + d.name + "'");
      symbols_.insert(d.name);
      check_type(d.type, d.loc);
    };
    for (const auto& d : m_.decls) one(d);
    for (const auto& d : m_.globals) one(d);
  }

  void free_vars(const Expr& e, const std::set<std::string>& bound, SourceLoc fallback) {
    for (const auto& v : free_names(e))
      if (!bound.count(v) && !symbols_.count(v))
        error(find_var(e, v, fallback), "free variable '" + v + "'");
  }

  void rule_ref(const std::string& name, SourceLoc loc, const char* what) {
    if (!rule_names_.count(name)) error(loc, std::string(what) + " refers to unknown rule '" + name + "'");
  }

  void rules() {
    for (const auto& r : m_.rules)
      if (!rule_names_.insert(r.name).second) error(r.loc, "duplicate rule name '" + r.name + "'");
    for (const auto& r : m_.rules) {
      std::set<std::string> bound;
      for (const auto& p : r.params) {
        if (!bound.insert(p.name).second)
          error(r.loc, "duplicate parameter '" + p.name + "' in rule " + r.name);
        check_type(p.type, r.loc);
      }
      if (r.annotation) annotation(r);
      if (r.is_derived()) continue;
      free_vars(r.precond, bound, r.loc);
      free_vars(r.postcond, bound, r.loc);
    }
  }

  void annotation(const Rule& r) {
    if (const auto* ra = r.restrict_ann()) {
      for (const auto& n : ra->subject_to) rule_ref(n, r.loc, "subjectTo");
      for (const auto& n : ra->despite) rule_ref(n, r.loc, "despite");
    } else if (const auto* d = r.derived_ann()) {
      for (const auto& n : d->apply.references()) rule_ref(n, r.loc, "derived rule");
      if (d->apply.kind == TransformExpr::Kind::Remap) {
        std::set<std::string> bound;
        for (const auto& p : d->apply.new_params) {
          bound.insert(p.name);
          check_type(p.type, r.loc);
        }
        for (const auto& [v, e] : d->apply.substitution) free_vars(e, bound, r.loc);
      }
    }
  }

  void assertions() {
    std::set<std::string> seen;
    for (const auto& a : m_.assertions) {
      if (!seen.insert(a.name).second) error(a.loc, "duplicate assertion name '" + a.name + "'");
      for (const auto& n : a.add_rules) rule_ref(n, a.loc, "assertion rule set");
      for (const auto& n : a.delete_rules) rule_ref(n, a.loc, "assertion rule set");
      free_vars(a.formula, {}, a.loc);
    }
  }

  const RuleModule& m_;
  std::map<std::string, std::string> parents_;
  std::set<std::string> symbols_;
  std::set<std::string> rule_names_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> check_well_formed(const RuleModule& m) { return Checker(m).run(); }

std::string format_diagnostic(const Diagnostic& d) {
  return format_loc(d.loc) + ": " +
         (d.severity == Diagnostic::Severity::Error ? "error: " : "warning: ") + d.message;
}

}  // namespace l4
