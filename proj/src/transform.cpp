#include "l4/transform.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "l4/errors.hpp"
#include "l4/expr_util.hpp"
#include "l4/printer.hpp"

namespace l4 {

const char* variant_name(RestrictionVariant v) {
  return v == RestrictionVariant::ViaPrecondition ? "precond" : "deriv";
}

std::string lifted_name(const std::string& p) { return p + "⁺"; }
std::string rulename_class(const std::string& p) { return "Rulename_" + p; }

namespace {

Rule* find_mut(std::vector<Rule>& rules, const std::string& name) {
  for (auto& r : rules)
    if (r.name == name) return &r;
  return nullptr;
}

bool is_lifted_param(const Param& p) {
  return p.type.is_class() && p.type.name().rfind("Rulename_", 0) == 0;
}

// Parameters without the trailing rule-name variables added by lifting.
std::vector<Param> base_params(const Rule& r) {
  std::vector<Param> ps = r.params;
  while (!ps.empty() && is_lifted_param(ps.back())) ps.pop_back();
  return ps;
}

std::string interface_text(const std::vector<Param>& ps) {
  std::string s = "(";
  for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? ", " : "") + ps[i].type.str();
  return s + ")";
}

// Renames o's base parameters positionally to r1's.
std::map<std::string, std::string> align(const Rule& r1, const Rule& o) {
  const auto want = base_params(r1);
  const auto have = base_params(o);
  bool same = want.size() == have.size();
  for (std::size_t i = 0; same && i < want.size(); ++i) same = want[i].type == have[i].type;
  if (!same)
    throw InterfaceMismatch("rule '" + o.name + "' has parameter interface " +
                                interface_text(have) + " but '" + r1.name + "' has " +
                                interface_text(want) + "; adapt it with remap",
                            o.loc);
  std::map<std::string, std::string> ren;
  for (std::size_t i = 0; i < want.size(); ++i) ren[have[i].name] = want[i].name;
  return ren;
}

Rule restrict_with(const Rule& r1, const std::vector<Rule>& overriders,
                   const std::function<const Expr&(const Rule&)>& part) {
  Rule out = r1;
  for (const auto& o : overriders)
    out.precond = Expr::and_(out.precond, Expr::not_(rename(part(o), align(r1, o))));
  return out;
}

}  // namespace

std::vector<Rule> despite_elim(const std::vector<Rule>& rules) {
  std::vector<Rule> out = rules;
  for (;;) {
    Rule* r1 = nullptr;
    for (auto& r : out) {
      const RestrictAnn* ra = r.restrict_ann();
      if (ra && !ra->despite.empty()) {
        r1 = &r;
        break;
      }
    }
    if (!r1) return out;
    auto& ra1 = std::get<RestrictAnn>(*r1->annotation);
    const std::string r2name = ra1.despite.front();
    ra1.despite.erase(ra1.despite.begin());
    const std::string r1name = r1->name;
    if (ra1.subject_to.empty() && ra1.despite.empty()) r1->annotation.reset();

    Rule* r2 = find_mut(out, r2name);
    if (!r2) throw NameError("despite refers to unknown rule '" + r2name + "'", r1->loc);
    if (!r2->annotation) r2->annotation = RestrictAnn{};
    auto* ra2 = std::get_if<RestrictAnn>(&*r2->annotation);
    if (!ra2)
      throw TransformError("rule '" + r2name + "' is the target of despite but already carries a " +
                               "non-restrict annotation",
                           r2->loc);
    ra2->subject_to.insert(ra2->subject_to.begin(), r1name);
  }
}

std::vector<Rule> subject_to_elim(const std::vector<Rule>& rules) {
  std::vector<Rule> out;
  for (const auto& r : rules) {
    const RestrictAnn* ra = r.restrict_ann();
    if (!ra) {
      out.push_back(r);
      continue;
    }
    if (!ra->despite.empty())
      throw TransformError("rule '" + r.name + "' still carries despite entries", r.loc);
    if (ra->subject_to.empty()) {
      Rule plain = r;
      plain.annotation.reset();
      out.push_back(std::move(plain));
      continue;
    }
    const std::string orig_name = r.name + kOrigSuffix;
    for (const auto& other : rules)
      if (other.name == orig_name)
        throw TransformError("cannot split rule '" + r.name + "': a rule named '" + orig_name +
                                 "' already exists",
                             other.loc);
    Rule orig = r;
    orig.name = orig_name;
    orig.annotation = SourceAnn{};
    Rule derived;
    derived.name = r.name;
    derived.loc = r.loc;
    TransformExpr t;
    t.kind = TransformExpr::Kind::RestrictSubjectTo;
    t.target = orig_name;
    t.overriders = ra->subject_to;
    derived.annotation = DerivedAnn{std::move(t)};
    out.push_back(std::move(orig));
    out.push_back(std::move(derived));
  }
  return out;
}

RuleOrder rule_order(const std::vector<Rule>& rules) {
  RuleOrder order;
  std::map<std::string, std::set<std::string>> succ;
  std::map<std::string, int> indeg;
  for (const auto& r : rules) {
    succ[r.name];
    indeg[r.name];
  }
  for (const auto& r : rules) {
    const DerivedAnn* d = r.derived_ann();
    if (!d) continue;
    for (const auto& ref : d->apply.references()) {
      if (!succ.count(ref))
        throw NameError("rule '" + r.name + "' is defined from unknown rule '" + ref + "'", r.loc);
      if (order.edges.emplace(ref, r.name).second) {
        succ[ref].insert(r.name);
        ++indeg[r.name];
      }
    }
  }
  std::set<std::string> ready;
  for (const auto& [n, k] : indeg)
    if (k == 0) ready.insert(n);
  while (!ready.empty()) {
    const std::string n = *ready.begin();
    ready.erase(ready.begin());
    order.sequence.push_back(n);
    for (const auto& s : succ[n])
      if (--indeg[s] == 0) ready.insert(s);
  }
  if (order.sequence.size() == succ.size()) return order;

  // Report a cycle through the smallest rule name that lies on one.
  std::set<std::string> left;
  for (const auto& [n, k] : indeg)
    if (k > 0) left.insert(n);
  for (const auto& start : left) {
    std::vector<std::string> path{start};
    std::set<std::string> seen{start};
    std::function<bool(const std::string&)> dfs = [&](const std::string& n) {
      for (const auto& s : succ[n]) {
        if (!left.count(s)) continue;
        if (s == start) {
          path.push_back(s);
          return true;
        }
        if (!seen.insert(s).second) continue;
        path.push_back(s);
        if (dfs(s)) return true;
        path.pop_back();
      }
      return false;
    };
    if (dfs(start)) throw CycleError(path);
  }
  throw CycleError(std::vector<std::string>(left.begin(), left.end()));
}

Rule restrict_subject_to_precond(const Rule& r1, const std::vector<Rule>& overriders) {
  return restrict_with(r1, overriders, [](const Rule& r) -> const Expr& { return r.precond; });
}

Rule restrict_subject_to_deriv(const Rule& r1, const std::vector<Rule>& overriders) {
  return restrict_with(r1, overriders, [](const Rule& r) -> const Expr& { return r.postcond; });
}

Rule remap(const Signature& sig, const Rule& r, const std::vector<Param>& new_params,
           const std::vector<std::pair<std::string, Expr>>& subst) {
  std::set<std::string> names;
  for (const auto& p : new_params)
    if (!names.insert(p.name).second)
      throw TransformError("remap of '" + r.name + "' declares parameter '" + p.name + "' twice",
                           r.loc);
  std::map<std::string, Expr> sub;
  for (const auto& [v, e] : subst)
    if (!sub.emplace(v, e).second)
      throw TransformError("remap of '" + r.name + "' substitutes '" + v + "' twice", r.loc);

  std::vector<Param> params = new_params;
  for (const auto& p : r.params) {
    if (sub.count(p.name)) continue;
    if (is_lifted_param(p)) {
      params.push_back(p);
      continue;
    }
    throw TransformError("remap of '" + r.name + "' lacks a substitution for '" + p.name + "'",
                         r.loc);
  }
  TypingContext ctx;
  for (const auto& p : params) {
    sig.check_type(p.type, r.loc);
    ctx.emplace_back(p.name, p.type);
  }
  for (const auto& [v, e] : subst) {
    auto it = std::find_if(r.params.begin(), r.params.end(),
                           [&](const Param& p) { return p.name == v; });
    if (it == r.params.end())
      throw TransformError("remap of '" + r.name + "' substitutes '" + v +
                               "', which is not one of its parameters",
                           r.loc);
    const LType t = type_of(sig, ctx, e);
    if (!sig.subtype(t, it->type))
      throw TypeError("remap of '" + r.name + "': `" + print_expr(e) + "` has type " + t.str() +
                          " but parameter '" + v + "' has type " + it->type.str(),
                      e.loc());
  }
  Rule out = r;
  out.params = std::move(params);
  out.precond = substitute(r.precond, sub);
  out.postcond = substitute(r.postcond, sub);
  return out;
}

std::vector<std::string> transformable_predicates(const std::vector<Rule>& rules) {
  std::vector<std::string> out;
  for (const auto& r : rules) {
    if (r.system || r.is_derived()) continue;
    const std::string p = atom_predicate(r.postcond);
    if (!p.empty() && std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  return out;
}

namespace {

class Lifter {
 public:
  explicit Lifter(const RuleModule& m) : m_(m), sig_(m) {}

  RuleModule run() {
    check_conclusions();
    preds_ = transformable_predicates(m_.rules);
    for (const auto& p : preds_) {
      if (sig_.characterized_class(p) || sig_.enum_of(p))
        throw UnsupportedError("predicate '" + p + "' cannot be lifted: it is generated");
      const LType* t = sig_.symbol(p);
      if (!t || !t->result_type().is(LType::Kind::Boolean))
        throw TransformError("concluded symbol '" + p + "' is not a declared predicate");
      arity_[p] = t->arg_types().size();
      if (sig_.has_class(rulename_class(p)) || sig_.is_symbol(lifted_name(p)))
        throw TransformError("lifting '" + p + "' would redeclare " + rulename_class(p) + " or " +
                             lifted_name(p));
    }
    compute_members();

    RuleModule out = m_;
    out.decls.clear();
    out.globals.clear();
    for (const auto& d : m_.decls) out.decls.push_back(lift_decl(d));
    for (const auto& d : m_.globals) {
      if (is_pred(d.name)) out.decls.push_back(lift_decl(d));
      else out.globals.push_back(d);
    }
    for (const auto& p : preds_) {
      ClassDecl c;
      c.name = rulename_class(p);
      c.members = members_.at(p);
      out.classes.push_back(std::move(c));
    }
    for (auto& r : out.rules) {
      if (r.system) continue;
      if (r.is_derived()) {
        for (const auto& [v, e] : r.derived_ann()->apply.substitution)
          for (const auto& n : free_names(e))
            if (is_pred(n))
              throw UnsupportedError("remap of '" + r.name + "' mentions lifted predicate '" + n + "'",
                                     r.loc);
        continue;
      }
      r = lift_rule(r);
    }
    for (auto& a : out.assertions) a.formula = lift_assertion(a.formula, {});
    return out;
  }

 private:
  bool is_pred(const std::string& n) const { return arity_.count(n) > 0; }

  void check_conclusions() const {
    for (const auto& r : m_.rules) {
      if (r.system || r.is_derived()) continue;
      const Spine s = flatten_app(r.postcond);
      bool ok = s.head.is(ExprKind::Var) && sig_.is_symbol(s.head.name());
      for (const auto& p : r.params) ok = ok && p.name != s.head.name();
      if (!ok)
        throw TransformError("rule '" + r.name + "' has non-atomic conclusion `" +
                                 print_expr(r.postcond) + "`",
                             r.loc);
    }
  }

  const Rule* find(const std::string& n) const { return m_.find_rule(n); }

  // The rule name that a conclusion of r carries once derivations are done.
  std::string final_name(const Rule& r) const {
    if (r.is_source() && r.name.size() > std::string(kOrigSuffix).size() &&
        r.name.compare(r.name.size() - 5, 5, kOrigSuffix) == 0) {
      const std::string base = r.name.substr(0, r.name.size() - 5);
      const Rule* d = find(base);
      if (d && d->is_derived()) return base;
    }
    return r.name;
  }

  std::string concluded(const Rule& r, std::size_t depth = 0) const {
    if (!r.is_derived()) return atom_predicate(r.postcond);
    if (depth > m_.rules.size()) return {};
    const Rule* t = find(r.derived_ann()->apply.target);
    return t ? concluded(*t, depth + 1) : std::string();
  }

  void compute_members() {
    for (const auto& p : preds_) members_[p];
    for (const auto& r : m_.rules) {
      if (r.system) continue;
      const std::string p = concluded(r);
      if (!is_pred(p)) continue;
      const std::string n = r.is_derived() ? r.name : final_name(r);
      auto& ms = members_[p];
      if (std::find(ms.begin(), ms.end(), n) == ms.end()) ms.push_back(n);
    }
  }

  FunDecl lift_decl(const FunDecl& d) const {
    if (!is_pred(d.name)) return d;
    return FunDecl{lifted_name(d.name), LType::function(LType::cls(rulename_class(d.name)), d.type),
                   d.loc};
  }

  Rule lift_rule(const Rule& r) {
    Rule out = r;
    std::set<std::string> taken = all_names(r.precond);
    for (const auto& n : all_names(r.postcond)) taken.insert(n);
    for (const auto& p : r.params) taken.insert(p.name);
    std::set<std::string> bound;
    for (const auto& p : r.params) bound.insert(p.name);
    out.precond = lift_pre(r.precond, bound, taken, out.params);
    const Spine s = flatten_app(r.postcond);
    std::vector<Expr> args{Expr::var(final_name(r))};
    args.insert(args.end(), s.args.begin(), s.args.end());
    out.postcond = Expr::apps(Expr::var(lifted_name(s.head.name()), s.head.loc()), args);
    return out;
  }

  Expr lift_pre(const Expr& e, std::set<std::string>& bound, std::set<std::string>& taken,
                std::vector<Param>& params) {
    if (e.is(ExprKind::Var)) {
      if (bound.count(e.name()) || !is_pred(e.name())) return e;
      const std::string rn = fresh_name("rn", taken);
      taken.insert(rn);
      params.push_back(Param{rn, LType::cls(rulename_class(e.name()))});
      return Expr::app(Expr::var(lifted_name(e.name()), e.loc()), Expr::var(rn), e.loc());
    }
    return map_kids(e, bound, [&](const Expr& k) { return lift_pre(k, bound, taken, params); });
  }

  Expr lift_assertion(const Expr& e, std::set<std::string> bound) {
    if (e.is(ExprKind::Var) || e.is(ExprKind::App)) {
      const Spine s = flatten_app(e);
      if (s.head.is(ExprKind::Var) && !bound.count(s.head.name()) && is_pred(s.head.name())) {
        const std::string& p = s.head.name();
        if (s.args.size() != arity_.at(p))
          throw UnsupportedError("assertion applies lifted predicate '" + p +
                                     "' to the wrong number of arguments",
                                 e.loc());
        std::vector<Expr> args;
        std::set<std::string> taken = bound;
        for (const auto& a : s.args) {
          args.push_back(lift_assertion(a, bound));
          for (const auto& n : all_names(a)) taken.insert(n);
        }
        const std::string rn = fresh_name("rn", taken);
        args.insert(args.begin(), Expr::var(rn));
        return Expr::exists(rn, LType::cls(rulename_class(p)),
                            Expr::apps(Expr::var(lifted_name(p), s.head.loc()), args), e.loc());
      }
    }
    return map_kids(e, bound, [&](const Expr& k) { return lift_assertion(k, bound); });
  }

  template <typename F>
  static Expr map_kids(const Expr& e, std::set<std::string>& bound, F&& f) {
    if (e.kids().empty()) return e;
    const bool binder =
        e.is(ExprKind::Forall) || e.is(ExprKind::Exists) || e.is(ExprKind::Lambda);
    const bool fresh = binder && bound.insert(e.name()).second;
    std::vector<Expr> kids;
    for (const auto& k : e.kids()) kids.push_back(f(k));
    if (fresh) bound.erase(e.name());
    return rebuild(e, std::move(kids));
  }

  static Expr rebuild(const Expr& e, std::vector<Expr> k) {
    const SourceLoc l = e.loc();
    switch (e.kind()) {
      case ExprKind::Not: return Expr::not_(k[0], l);
      case ExprKind::And: return Expr::and_(k[0], k[1], l);
      case ExprKind::Or: return Expr::or_(k[0], k[1], l);
      case ExprKind::Implies: return Expr::implies(k[0], k[1], l);
      case ExprKind::Eq: return Expr::eq(k[0], k[1], l);
      case ExprKind::Cmp: return Expr::cmp(e.cmp_op(), k[0], k[1], l);
      case ExprKind::App: return Expr::app(k[0], k[1], l);
      case ExprKind::IfThenElse: return Expr::ite(k[0], k[1], k[2], l);
      case ExprKind::Lambda: return Expr::lambda(e.name(), e.binder_type(), k[0], l);
      case ExprKind::Forall: return Expr::forall(e.name(), e.binder_type(), k[0], l);
      case ExprKind::Exists: return Expr::exists(e.name(), e.binder_type(), k[0], l);
      case ExprKind::FieldAccess: return Expr::field(k[0], e.name(), l);
      default: return e;
    }
  }

  const RuleModule& m_;
  Signature sig_;
  std::vector<std::string> preds_;
  std::map<std::string, std::size_t> arity_;
  std::map<std::string, std::vector<std::string>> members_;
};

// In a lifted conclusion P⁺ c args, replaces c by the rule's own name.
Expr restamp(const Expr& post, const std::string& name) {
  const Spine s = flatten_app(post);
  if (s.args.empty() || !s.head.is(ExprKind::Var)) return post;
  const std::string& h = s.head.name();
  const std::string plus = lifted_name("");
  if (h.size() <= plus.size() || h.compare(h.size() - plus.size(), plus.size(), plus) != 0)
    return post;
  std::vector<Expr> args = s.args;
  args[0] = Expr::var(name, args[0].loc());
  return Expr::apps(s.head, args);
}

}  // namespace

RuleModule lift_predicates(const RuleModule& m) { return Lifter(m).run(); }

std::vector<Rule> eval_derived(const Signature& sig, const std::vector<Rule>& rules,
                               RestrictionVariant variant) {
  const RuleOrder order = rule_order(rules);
  std::map<std::string, const Rule*> by_name;
  for (const auto& r : rules) by_name[r.name] = &r;
  std::map<std::string, Rule> done;
  for (const auto& n : order.sequence) {
    const Rule& r = *by_name.at(n);
    const DerivedAnn* d = r.derived_ann();
    if (!d) {
      done.emplace(n, r);
      continue;
    }
    const TransformExpr& t = d->apply;
    const Rule& target = done.at(t.target);
    Rule result;
    if (t.kind == TransformExpr::Kind::RestrictSubjectTo) {
      std::vector<Rule> os;
      for (const auto& o : t.overriders) os.push_back(done.at(o));
      result = variant == RestrictionVariant::ViaPrecondition ? restrict_subject_to_precond(target, os)
                                                             : restrict_subject_to_deriv(target, os);
    } else {
      result = remap(sig, target, t.new_params, t.substitution);
    }
    result.name = r.name;
    result.annotation.reset();
    result.system = false;
    result.loc = r.loc;
    if (variant == RestrictionVariant::ViaDerivability)
      result.postcond = restamp(result.postcond, r.name);
    done.emplace(n, std::move(result));
  }
  std::vector<Rule> out;
  for (const auto& r : rules) {
    if (r.is_source()) continue;
    Rule x = done.at(r.name);
    if (x.is_source()) x.annotation.reset();
    out.push_back(std::move(x));
  }
  return out;
}

// ---------------------------------------------------------------------------
// simplify

namespace {

using Inclusions = std::set<std::pair<std::string, std::string>>;

bool is_connective(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Not:
    case ExprKind::And:
    case ExprKind::Or:
    case ExprKind::Implies:
    case ExprKind::BoolLit: return true;
    default: return false;
  }
}

bool is_true(const Expr& e) { return e.is(ExprKind::BoolLit) && e.bool_value(); }
bool is_false(const Expr& e) { return e.is(ExprKind::BoolLit) && !e.bool_value(); }

struct Lit {
  Expr atom;
  bool positive;
};

std::vector<Expr> flatten(const Expr& e, ExprKind k) {
  if (!e.is(k)) return {e};
  auto l = flatten(e.kid(0), k);
  auto r = flatten(e.kid(1), k);
  l.insert(l.end(), r.begin(), r.end());
  return l;
}

std::optional<Lit> as_literal(const Expr& e) {
  if (e.is(ExprKind::Not) && !is_connective(e.kid(0))) return Lit{e.kid(0), false};
  if (!is_connective(e)) return Lit{e, true};
  return std::nullopt;
}

class Simplifier {
 public:
  explicit Simplifier(const Inclusions& inc) : inc_(inc) {}

  Expr run(const Expr& e, const std::vector<Lit>& ctx) {
    switch (e.kind()) {
      case ExprKind::Not: return negate(run(e.kid(0), ctx), ctx);
      case ExprKind::And: return junction(e, ctx, true);
      case ExprKind::Or: return junction(e, ctx, false);
      case ExprKind::Implies: {
        const Expr a = run(e.kid(0), ctx);
        std::vector<Lit> inner = ctx;
        add_literals(a, true, inner);
        const Expr b = run(e.kid(1), inner);
        if (is_false(a) || is_true(b)) return Expr::bool_lit(true);
        if (is_true(a)) return b;
        if (is_false(b)) return negate(a, ctx);
        return Expr::implies(a, b, e.loc());
      }
      case ExprKind::Forall:
      case ExprKind::Exists: {
        std::vector<Lit> inner;
        for (const auto& l : ctx)
          if (!free_names(l.atom).count(e.name())) inner.push_back(l);
        const Expr body = run(e.kid(0), inner);
        if (body.is(ExprKind::BoolLit)) return body;
        return e.is(ExprKind::Forall) ? Expr::forall(e.name(), e.binder_type(), body, e.loc())
                                      : Expr::exists(e.name(), e.binder_type(), body, e.loc());
      }
      case ExprKind::BoolLit: return e;
      default: {
        if (known(e, true, ctx)) return Expr::bool_lit(true);
        if (known(e, false, ctx)) return Expr::bool_lit(false);
        return e;
      }
    }
  }

 private:
  Expr negate(const Expr& x, const std::vector<Lit>& ctx) {
    if (x.is(ExprKind::BoolLit)) return Expr::bool_lit(!x.bool_value());
    if (x.is(ExprKind::Not)) return x.kid(0);
    if (x.is(ExprKind::Or)) {
      std::vector<Expr> parts;
      for (const auto& d : flatten(x, ExprKind::Or)) parts.push_back(Expr::not_(d));
      return run(Expr::conj(parts), ctx);
    }
    return Expr::not_(x);
  }

  // x ∈ {isB t} with isC t known true and isC ⇒ isB, or the dual for false.
  bool known(const Expr& atom, bool positive, const std::vector<Lit>& ctx) const {
    for (const auto& l : ctx) {
      if (l.positive != positive) continue;
      if (l.atom == atom) return true;
      if (!atom.is(ExprKind::App) || !l.atom.is(ExprKind::App)) continue;
      if (!(atom.kid(1) == l.atom.kid(1))) continue;
      if (!atom.kid(0).is(ExprKind::Var) || !l.atom.kid(0).is(ExprKind::Var)) continue;
      const auto& a = atom.kid(0).name();
      const auto& b = l.atom.kid(0).name();
      if (positive ? inc_.count({b, a}) : inc_.count({a, b})) return true;
    }
    return false;
  }

  // Literals that hold when e has truth value `value`.
  static void add_literals(const Expr& e, bool value, std::vector<Lit>& out) {
    const ExprKind k = value ? ExprKind::And : ExprKind::Or;
    for (const auto& part : flatten(e, k)) {
      if (auto l = as_literal(part)) out.push_back(Lit{l->atom, l->positive == value});
    }
  }

  Expr junction(const Expr& e, const std::vector<Lit>& ctx, bool conj) {
    const ExprKind k = conj ? ExprKind::And : ExprKind::Or;
    std::vector<Expr> parts;
    for (const auto& p : flatten(e, k)) {
      for (const auto& q : flatten(p, k)) parts.push_back(q);
    }
    // Each part is simplified assuming the others; parts are replaced in
    // place, so every single step preserves equivalence.
    for (int round = 0; round < 8; ++round) {
      bool changed = false;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        std::vector<Lit> local = ctx;
        for (std::size_t j = 0; j < parts.size(); ++j) {
          if (j == i) continue;
          if (auto l = as_literal(parts[j])) local.push_back(Lit{l->atom, l->positive == conj});
        }
        Expr s = run(parts[i], local);
        if (!(s == parts[i])) {
          changed = true;
          parts[i] = s;
        }
        if (conj ? is_false(s) : is_true(s)) return s;
      }
      std::vector<Expr> kept;
      for (const auto& p : parts) {
        if (conj ? is_true(p) : is_false(p)) continue;
        for (const auto& q : flatten(p, k)) kept.push_back(q);
      }
      if (kept.size() != parts.size()) changed = true;
      parts = std::move(kept);
      if (!changed) break;
    }
    if (parts.empty()) return Expr::bool_lit(conj);
    return conj ? Expr::conj(parts) : Expr::disj(parts);
  }

  const Inclusions& inc_;
};

}  // namespace

Expr simplify(const Expr& f, const Inclusions& inclusions) {
  return Simplifier(inclusions).run(f, {});
}

PipelineResult run_pipeline(const RuleModule& m, const PipelineOptions& opts) {
  PipelineResult res;
  std::vector<Rule> user, system;
  for (const auto& r : m.rules) (r.system ? system : user).push_back(r);
  res.trace.push_back({"input", user});

  user = despite_elim(user);
  res.trace.push_back({"despite-elim", user});
  user = subject_to_elim(user);
  res.trace.push_back({"subject-to-elim", user});
  res.order = rule_order(user);

  RuleModule work = m;
  work.rules = user;
  work.rules.insert(work.rules.end(), system.begin(), system.end());
  if (opts.variant == RestrictionVariant::ViaDerivability) {
    work = lift_predicates(work);
    user.clear();
    for (const auto& r : work.rules)
      if (!r.system) user.push_back(r);
    res.trace.push_back({"lift", user});
  }
  const Signature sig(work);
  user = eval_derived(sig, user, opts.variant);
  res.trace.push_back({"eval-derived", user});
  if (opts.simplify) {
    const auto inc = inclusion_pairs(sig);
    for (auto& r : user) r.precond = simplify(r.precond, inc);
    res.trace.push_back({"simplify", user});
  }
  work.rules = user;
  work.rules.insert(work.rules.end(), system.begin(), system.end());
  res.module = std::move(work);
  return res;
}

}  // namespace l4
