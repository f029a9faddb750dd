#include "l4/typecheck.hpp"

#include <algorithm>

#include "l4/errors.hpp"
#include "l4/printer.hpp"

namespace l4 {

namespace {

const std::vector<std::string> kNoMembers;
const std::vector<Param> kNoAttrs;

}  // namespace

bool is_builtin_type_name(const std::string& n) {
  return n == "Boolean" || n == "Integer" || n == "Float" || n == "String";
}

std::string char_pred_name(const std::string& c) { return "is" + c; }

std::string inclusion_rule_name(const std::string& c, const std::string& b) {
  return c + "'extends'" + b;
}

Signature::Signature(const RuleModule& m) {
  for (const auto& c : m.classes) {
    if (parent_.count(c.name) || c.name == kTopClass || is_builtin_type_name(c.name))
      throw NameError("duplicate or reserved class name '" + c.name + "'", c.loc);
    parent_[c.name] = c.parent;
    class_order_.push_back(c.name);
    if (!c.members.empty()) members_[c.name] = c.members;
    attrs_[c.name] = c.attributes;
  }
  for (const auto& c : m.classes) {
    if (c.parent != kTopClass && !parent_.count(c.parent)) {
      if (is_builtin_type_name(c.parent))
        throw NameError("class '" + c.name + "' cannot extend builtin type " + c.parent, c.loc);
      throw NameError("class '" + c.name + "' extends unknown class '" + c.parent + "'", c.loc);
    }
    std::string cur = c.name;
    for (std::size_t steps = 0; cur != kTopClass; ++steps) {
      if (steps > parent_.size())
        throw NameError("class hierarchy has a cycle through '" + c.name + "'", c.loc);
      cur = parent_.at(cur);
    }
  }
  for (const auto& d : m.decls) add_symbol(d.name, d.type, false);
  for (const auto& d : m.globals) {
    add_symbol(d.name, d.type, false);
    globals_.insert(d.name);
  }
  for (const auto& c : class_order_) {
    if (is_enum(c)) {
      for (const auto& mem : members_.at(c)) {
        add_symbol(mem, LType::cls(c), true);
        enum_of_[mem] = c;
      }
      continue;
    }
    const std::string cp = char_pred_name(c);
    char_pred_[cp] = c;
    add_symbol(cp, LType::function(LType::cls(sort_of(c)), LType::boolean()), true);
    for (const auto& a : attrs_.at(c)) add_symbol(a.name, LType::function(LType::cls(c), a.type), true);
  }
}

void Signature::add_symbol(const std::string& name, const LType& t, bool generated) {
  if (symbols_.count(name)) return;
  symbols_.emplace(name, t);
  symbol_order_.push_back(name);
  if (generated) generated_.insert(name);
}

void Signature::declare(const std::string& name, const LType& type) {
  if (!symbols_.count(name)) symbol_order_.push_back(name);
  symbols_.insert_or_assign(name, type);
}

void Signature::add_enum(const std::string& name, std::vector<std::string> members) {
  if (!parent_.count(name)) class_order_.push_back(name);
  parent_[name] = kTopClass;
  attrs_[name] = {};
  for (const auto& mem : members) {
    declare(mem, LType::cls(name));
    generated_.insert(mem);
    enum_of_[mem] = name;
  }
  members_[name] = std::move(members);
}

const std::string& Signature::parent(const std::string& c) const {
  auto it = parent_.find(c);
  if (it == parent_.end()) throw NameError("unknown class '" + c + "'");
  return it->second;
}

const std::string& Signature::sort_of(const std::string& c) const {
  const std::string* cur = &c;
  for (;;) {
    const std::string& p = parent(*cur);
    if (p == kTopClass) return parent_.find(*cur)->first;
    cur = &p;
  }
}

bool Signature::is_sort(const std::string& c) const {
  auto it = parent_.find(c);
  return it != parent_.end() && it->second == kTopClass;
}

std::vector<std::string> Signature::sorts() const {
  std::vector<std::string> out;
  for (const auto& c : class_order_)
    if (is_sort(c)) out.push_back(c);
  return out;
}

bool Signature::is_enum(const std::string& c) const { return members_.count(c) > 0; }

const std::vector<std::string>& Signature::members(const std::string& c) const {
  auto it = members_.find(c);
  return it == members_.end() ? kNoMembers : it->second;
}

const std::vector<Param>& Signature::attributes(const std::string& c) const {
  auto it = attrs_.find(c);
  return it == attrs_.end() ? kNoAttrs : it->second;
}

bool Signature::subclass(const std::string& c, const std::string& b) const {
  if (b == kTopClass) {
    if (c != kTopClass) parent(c);
    return true;
  }
  if (c == kTopClass) {
    parent(b);
    return false;
  }
  parent(b);
  for (std::string cur = c; cur != kTopClass; cur = parent(cur))
    if (cur == b) return true;
  return false;
}

bool Signature::subtype(const LType& a, const LType& b) const {
  using K = LType::Kind;
  if (a.kind() != b.kind()) {
    check_type(a);
    check_type(b);
    return false;
  }
  switch (a.kind()) {
    case K::Class: return subclass(a.name(), b.name());
    case K::Function:
      return subtype(b.domain(), a.domain()) && subtype(a.codomain(), b.codomain());
    case K::Tuple: {
      if (a.args().size() != b.args().size()) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!subtype(a.args()[i], b.args()[i])) return false;
      return true;
    }
    default: return true;
  }
}

void Signature::check_type(const LType& t, SourceLoc loc) const {
  if (t.is_class()) {
    if (t.name() != kTopClass && !has_class(t.name()))
      throw NameError("unknown class '" + t.name() + "'", loc);
    return;
  }
  for (const auto& a : t.args()) check_type(a, loc);
}

const LType* Signature::symbol(const std::string& name) const {
  auto it = symbols_.find(name);
  return it == symbols_.end() ? nullptr : &it->second;
}

std::optional<std::string> Signature::enum_of(const std::string& constant) const {
  auto it = enum_of_.find(constant);
  if (it == enum_of_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> Signature::characterized_class(const std::string& pred) const {
  auto it = char_pred_.find(pred);
  if (it == char_pred_.end()) return std::nullopt;
  return it->second;
}

std::optional<LType> Signature::field(const std::string& c, const std::string& f) const {
  for (std::string cur = c; cur != kTopClass; cur = parent(cur))
    for (const auto& a : attributes(cur))
      if (a.name == f) return a.type;
  return std::nullopt;
}

namespace {

[[noreturn]] void mismatch(const std::string& what, const LType& expected, const LType& actual,
                           const Expr& at) {
  throw TypeError(what + ": expected " + expected.str() + ", found " + actual.str() + " in `" +
                      print_expr(at) + "`",
                  at.loc());
}

class Typer {
 public:
  Typer(const Signature& sig, TypingContext ctx) : sig_(sig), ctx_(std::move(ctx)) {}

  LType infer(const Expr& e) {
    using K = ExprKind;
    switch (e.kind()) {
      case K::Var: return lookup(e);
      case K::BoolLit: return LType::boolean();
      case K::IntLit: return LType::integer();
      case K::FloatLit: return LType::floating();
      case K::StringLit: return LType::string();
      case K::Not:
        expect_bool(e.kid(0));
        return LType::boolean();
      case K::And:
      case K::Or:
      case K::Implies:
        expect_bool(e.kid(0));
        expect_bool(e.kid(1));
        return LType::boolean();
      case K::Eq: {
        const LType a = infer(e.kid(0));
        const LType b = infer(e.kid(1));
        if (!comparable(a, b)) mismatch("equality operands", a, b, e);
        return LType::boolean();
      }
      case K::Cmp: {
        const LType a = infer(e.kid(0));
        const LType b = infer(e.kid(1));
        const bool numeric = a.is(LType::Kind::Integer) || a.is(LType::Kind::Float);
        if (!numeric) mismatch("comparison operand", LType::integer(), a, e.kid(0));
        if (!(a == b)) mismatch("comparison operands", a, b, e);
        return LType::boolean();
      }
      case K::App: {
        const LType f = infer(e.kid(0));
        if (!f.is(LType::Kind::Function))
          throw TypeError("`" + print_expr(e.kid(0)) + "` of type " + f.str() +
                              " is applied but is not a function",
                          e.loc());
        const LType a = infer(e.kid(1));
        if (!sig_.subtype(a, f.domain())) mismatch("argument", f.domain(), a, e.kid(1));
        return f.codomain();
      }
      case K::Lambda: {
        sig_.check_type(e.binder_type(), e.loc());
        ctx_.emplace_back(e.name(), e.binder_type());
        LType body = infer(e.kid(0));
        ctx_.pop_back();
        return LType::function(e.binder_type(), std::move(body));
      }
      case K::Forall:
      case K::Exists:
        sig_.check_type(e.binder_type(), e.loc());
        ctx_.emplace_back(e.name(), e.binder_type());
        expect_bool(e.kid(0));
        ctx_.pop_back();
        return LType::boolean();
      case K::IfThenElse: {
        expect_bool(e.kid(0));
        const LType t = infer(e.kid(1));
        const LType f = infer(e.kid(2));
        if (sig_.subtype(t, f)) return f;
        if (sig_.subtype(f, t)) return t;
        if (t.is_class() && f.is_class() && sig_.sort_of(t.name()) == sig_.sort_of(f.name())) {
          std::string j = t.name();
          while (!sig_.subclass(f.name(), j)) j = sig_.parent(j);
          return LType::cls(j);
        }
        mismatch("conditional branches", t, f, e);
      }
      case K::FieldAccess: {
        const LType t = infer(e.kid(0));
        if (!t.is_class())
          throw TypeError("field access `." + e.name() + "` on non-class type " + t.str(), e.loc());
        auto ft = sig_.field(t.name(), e.name());
        if (!ft)
          throw TypeError("class " + t.name() + " has no field '" + e.name() + "'", e.loc());
        return *ft;
      }
    }
    throw TypeError("unhandled expression", e.loc());
  }

 private:
  LType lookup(const Expr& e) {
    for (auto it = ctx_.rbegin(); it != ctx_.rend(); ++it)
      if (it->first == e.name()) return it->second;
    if (const LType* t = sig_.symbol(e.name())) return *t;
    throw NameError("unknown identifier '" + e.name() + "'", e.loc());
  }

  void expect_bool(const Expr& e) {
    const LType t = infer(e);
    if (!t.is(LType::Kind::Boolean)) mismatch("condition", LType::boolean(), t, e);
  }

  bool comparable(const LType& a, const LType& b) const {
    if (sig_.subtype(a, b) || sig_.subtype(b, a)) return true;
    return a.is_class() && b.is_class() && a.name() != kTopClass && b.name() != kTopClass &&
           sig_.sort_of(a.name()) == sig_.sort_of(b.name());
  }

  const Signature& sig_;
  TypingContext ctx_;
};

void expect_formula(const Signature& sig, const TypingContext& ctx, const Expr& e) {
  const LType t = type_of(sig, ctx, e);
  if (!t.is(LType::Kind::Boolean)) mismatch("formula", LType::boolean(), t, e);
}

TypingContext context_of(const Signature& sig, const std::vector<Param>& ps, SourceLoc loc) {
  TypingContext ctx;
  for (const auto& p : ps) {
    sig.check_type(p.type, loc);
    ctx.emplace_back(p.name, p.type);
  }
  return ctx;
}

}  // namespace

LType type_of(const Signature& sig, const TypingContext& ctx, const Expr& e) {
  return Typer(sig, ctx).infer(e);
}

void typecheck_module(const RuleModule& m) {
  const Signature sig(m);
  for (const auto& c : m.classes)
    for (const auto& a : c.attributes) sig.check_type(a.type, c.loc);
  for (const auto& d : m.decls) sig.check_type(d.type, d.loc);
  for (const auto& d : m.globals) sig.check_type(d.type, d.loc);
  for (const auto& r : m.rules) {
    if (r.is_derived()) {
      const auto& t = r.derived_ann()->apply;
      if (t.kind == TransformExpr::Kind::Remap) context_of(sig, t.new_params, r.loc);
      continue;
    }
    const TypingContext ctx = context_of(sig, r.params, r.loc);
    expect_formula(sig, ctx, r.precond);
    expect_formula(sig, ctx, r.postcond);
  }
  for (const auto& a : m.assertions) expect_formula(sig, {}, a.formula);
}

RuleModule elaborate(const RuleModule& m) {
  const Signature sig(m);
  RuleModule out = m;

  auto declare = [&](const std::string& name, const LType& t, const std::string& why,
                     SourceLoc loc) {
    for (const auto& g : out.globals)
      if (g.name == name)
        throw NameError("global '" + name + "' collides with generated " + why, g.loc);
    for (const auto& d : out.decls) {
      if (d.name != name) continue;
      if (d.type == t) return;
      throw NameError("declaration '" + name + "' : " + d.type.str() + " collides with generated " +
                          why + " of type " + t.str(),
                      d.loc);
    }
    out.decls.push_back(FunDecl{name, t, loc});
  };

  for (const auto& c : m.classes) {
    if (!c.members.empty()) continue;
    const LType s = LType::cls(sig.sort_of(c.name));
    declare(char_pred_name(c.name), LType::function(s, LType::boolean()),
            "characteristic predicate of class " + c.name, c.loc);
    for (const auto& a : c.attributes)
      declare(a.name, LType::function(LType::cls(c.name), a.type), "attribute selector", c.loc);
  }

  for (const auto& c : m.classes) {
    if (c.parent == kTopClass) continue;
    Rule r;
    r.name = inclusion_rule_name(c.name, c.parent);
    r.system = true;
    r.params = {Param{"x", LType::cls(sig.sort_of(c.name))}};
    r.precond = Expr::app(Expr::var(char_pred_name(c.name)), Expr::var("x"));
    r.postcond = Expr::app(Expr::var(char_pred_name(c.parent)), Expr::var("x"));
    r.loc = c.loc;
    if (const Rule* existing = out.find_rule(r.name)) {
      if (*existing == r) continue;
      throw NameError("rule '" + r.name + "' collides with a generated class-inclusion rule",
                      existing->loc);
    }
    out.rules.push_back(std::move(r));
  }
  return out;
}

std::set<std::pair<std::string, std::string>> inclusion_pairs(const Signature& sig) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& c : sig.classes()) {
    if (sig.is_enum(c)) continue;
    for (std::string b = sig.parent(c); b != kTopClass; b = sig.parent(b))
      out.emplace(char_pred_name(c), char_pred_name(b));
  }
  return out;
}

}  // namespace l4
