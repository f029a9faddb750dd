#include "l4/inversion.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "l4/errors.hpp"
#include "l4/expr_util.hpp"
#include "l4/printer.hpp"

namespace l4 {

namespace {

// s, t, u, w, x, y, z, s1, t1, ...
class FreshNames {
 public:
  explicit FreshNames(std::set<std::string> taken) : taken_(std::move(taken)) {}

  std::string next() {
    static const char* const base[] = {"s", "t", "u", "w", "x", "y", "z"};
    for (;;) {
      std::string c = base[i_ % 7];
      if (i_ >= 7) c += std::to_string(i_ / 7);
      ++i_;
      if (taken_.insert(c).second) return c;
    }
  }

 private:
  std::set<std::string> taken_;
  std::size_t i_ = 0;
};

std::set<std::string> names_of(const Signature& sig, const Rule& r) {
  std::set<std::string> taken = all_names(r.precond);
  for (const auto& n : all_names(r.postcond)) taken.insert(n);
  for (const auto& p : r.params) taken.insert(p.name);
  for (const auto& s : sig.symbol_order()) taken.insert(s);
  return taken;
}

}  // namespace

Rule NormalizedRule::to_rule() const {
  Rule r;
  r.name = name;
  r.params = params;
  r.precond = precond;
  std::vector<Expr> args;
  for (const auto& p : params) args.push_back(Expr::var(p.name));
  r.postcond = Expr::apps(Expr::var(predicate), args);
  return r;
}

NormalizedRule normalize_rule(const Signature& sig, const Rule& r) {
  const Spine s = flatten_app(r.postcond);
  const bool is_param_head =
      s.head.is(ExprKind::Var) &&
      std::any_of(r.params.begin(), r.params.end(),
                  [&](const Param& p) { return p.name == s.head.name(); });
  const LType* pt = s.head.is(ExprKind::Var) && !is_param_head ? sig.symbol(s.head.name()) : nullptr;
  if (!pt || pt->arg_types().size() != s.args.size() || !pt->result_type().is(LType::Kind::Boolean))
    throw TransformError("rule '" + r.name + "' does not conclude a fully applied predicate: `" +
                             print_expr(r.postcond) + "`",
                         r.loc);
  const std::vector<LType> dom = pt->arg_types();

  NormalizedRule out;
  out.name = r.name;
  out.predicate = s.head.name();
  out.arity = s.args.size();

  std::map<std::string, const Param*> param_of;
  for (const auto& p : r.params) param_of[p.name] = &p;

  FreshNames fresh(names_of(sig, r));
  std::set<std::string> used;
  std::vector<Expr> guards, equations;
  for (std::size_t i = 0; i < s.args.size(); ++i) {
    const Expr& a = s.args[i];
    if (a.is(ExprKind::Var) && param_of.count(a.name()) && !used.count(a.name())) {
      const Param& p = *param_of.at(a.name());
      used.insert(p.name);
      out.params.push_back(Param{p.name, dom[i]});
      if (!(p.type == dom[i])) {
        if (!p.type.is_class())
          throw TransformError("rule '" + r.name + "': parameter '" + p.name + "' of type " +
                                   p.type.str() + " cannot be widened to " + dom[i].str(),
                               r.loc);
        guards.push_back(Expr::app(Expr::var(char_pred_name(p.type.name())), Expr::var(p.name)));
      }
      continue;
    }
    const std::string z = fresh.next();
    out.params.push_back(Param{z, dom[i]});
    equations.push_back(Expr::eq(Expr::var(z), a));
  }

  std::vector<Expr> parts = guards;
  if (!(r.precond == Expr::bool_lit(true)) || (guards.empty() && equations.empty()))
    parts.push_back(r.precond);
  parts.insert(parts.end(), equations.begin(), equations.end());
  Expr body = Expr::conj(parts);
  for (auto it = r.params.rbegin(); it != r.params.rend(); ++it)
    if (!used.count(it->name)) body = Expr::exists(it->name, it->type, body);
  out.precond = body;
  return out;
}

std::vector<Rule> rules_for(const std::vector<Rule>& rules, const std::string& p) {
  std::vector<Rule> out;
  for (const auto& r : rules)
    if (!r.is_derived() && atom_predicate(r.postcond) == p) out.push_back(r);
  return out;
}

Expr inversion_formula(const Signature& sig, const std::vector<Rule>& rules, const std::string& p) {
  const LType* pt = sig.symbol(p);
  if (!pt) throw NameError("unknown predicate '" + p + "'");
  const std::vector<LType> dom = pt->arg_types();

  std::vector<NormalizedRule> norm;
  for (const auto& r : rules_for(rules, p)) norm.push_back(normalize_rule(sig, r));

  std::vector<std::string> xs;
  if (!norm.empty()) {
    for (const auto& q : norm.front().params) xs.push_back(q.name);
  } else {
    std::set<std::string> taken(sig.symbol_order().begin(), sig.symbol_order().end());
    FreshNames fresh(taken);
    for (std::size_t i = 0; i < dom.size(); ++i) xs.push_back(fresh.next());
  }

  std::vector<Expr> disjuncts;
  for (const auto& n : norm) {
    std::map<std::string, Expr> sub;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (n.params[i].name != xs[i]) sub.emplace(n.params[i].name, Expr::var(xs[i]));
    disjuncts.push_back(substitute(n.precond, sub));
  }
  std::vector<Expr> args;
  for (const auto& x : xs) args.push_back(Expr::var(x));
  const Expr atom = Expr::apps(Expr::var(p), args);
  Expr body = disjuncts.empty() ? Expr::not_(atom) : Expr::implies(atom, Expr::disj(disjuncts));
  for (std::size_t i = xs.size(); i-- > 0;) body = Expr::forall(xs[i], dom[i], body);
  return body;
}

namespace {

struct PolarityWalk {
  const std::string& p;
  const std::string& rule;
  std::vector<Occurrence>& out;

  // negations < 0 marks mixed polarity.
  void walk(const Expr& e, int negations, std::set<std::string>& bound) {
    switch (e.kind()) {
      case ExprKind::Var:
        if (e.name() == p && !bound.count(p) && (negations < 0 || negations % 2 == 1))
          out.push_back(Occurrence{rule, e.loc(), negations});
        return;
      case ExprKind::Not: walk(e.kid(0), flip(negations), bound); return;
      case ExprKind::Implies:
        walk(e.kid(0), flip(negations), bound);
        walk(e.kid(1), negations, bound);
        return;
      case ExprKind::And:
      case ExprKind::Or:
        walk(e.kid(0), negations, bound);
        walk(e.kid(1), negations, bound);
        return;
      case ExprKind::IfThenElse:
        walk(e.kid(0), -1, bound);
        walk(e.kid(1), negations, bound);
        walk(e.kid(2), negations, bound);
        return;
      case ExprKind::App: {
        const Spine s = flatten_app(e);
        walk(s.head, negations, bound);
        for (const auto& a : s.args) walk(a, -1, bound);
        return;
      }
      case ExprKind::Forall:
      case ExprKind::Exists:
      case ExprKind::Lambda: {
        const bool fresh = bound.insert(e.name()).second;
        walk(e.kid(0), e.is(ExprKind::Lambda) ? -1 : negations, bound);
        if (fresh) bound.erase(e.name());
        return;
      }
      default:
        for (const auto& k : e.kids()) walk(k, -1, bound);
    }
  }

  static int flip(int n) { return n < 0 ? n : n + 1; }
};

}  // namespace

MonotonicityReport check_syntactic_monotonicity(const std::vector<Rule>& rules,
                                                const std::string& p) {
  MonotonicityReport rep;
  for (const auto& r : rules_for(rules, p)) {
    std::set<std::string> bound;
    for (const auto& q : r.params) bound.insert(q.name);
    PolarityWalk w{p, r.name, rep.offending};
    w.walk(r.precond, 0, bound);
  }
  rep.monotonic = rep.offending.empty();
  return rep;
}

}  // namespace l4
