#include "l4/expr_util.hpp"

#include <deque>

namespace l4 {

namespace {

bool is_binder(ExprKind k) {
  return k == ExprKind::Lambda || k == ExprKind::Forall || k == ExprKind::Exists;
}

Expr rebuild(const Expr& e, std::vector<Expr> kids) {
  const SourceLoc loc = e.loc();
  switch (e.kind()) {
    case ExprKind::Not: return Expr::not_(kids[0], loc);
    case ExprKind::And: return Expr::and_(kids[0], kids[1], loc);
    case ExprKind::Or: return Expr::or_(kids[0], kids[1], loc);
    case ExprKind::Implies: return Expr::implies(kids[0], kids[1], loc);
    case ExprKind::Eq: return Expr::eq(kids[0], kids[1], loc);
    case ExprKind::Cmp: return Expr::cmp(e.cmp_op(), kids[0], kids[1], loc);
    case ExprKind::App: return Expr::app(kids[0], kids[1], loc);
    case ExprKind::IfThenElse: return Expr::ite(kids[0], kids[1], kids[2], loc);
    case ExprKind::Lambda: return Expr::lambda(e.name(), e.binder_type(), kids[0], loc);
    case ExprKind::Forall: return Expr::forall(e.name(), e.binder_type(), kids[0], loc);
    case ExprKind::Exists: return Expr::exists(e.name(), e.binder_type(), kids[0], loc);
    case ExprKind::FieldAccess: return Expr::field(kids[0], e.name(), loc);
    default: return e;
  }
}

Expr rebind(const Expr& e, const std::string& v, Expr body) {
  switch (e.kind()) {
    case ExprKind::Lambda: return Expr::lambda(v, e.binder_type(), std::move(body), e.loc());
    case ExprKind::Forall: return Expr::forall(v, e.binder_type(), std::move(body), e.loc());
    default: return Expr::exists(v, e.binder_type(), std::move(body), e.loc());
  }
}

void collect_free(const Expr& e, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (e.kind()) {
    case ExprKind::Var:
      if (!bound.count(e.name())) out.insert(e.name());
      return;
    case ExprKind::Lambda:
    case ExprKind::Forall:
    case ExprKind::Exists: {
      const bool fresh = bound.insert(e.name()).second;
      collect_free(e.kid(0), bound, out);
      if (fresh) bound.erase(e.name());
      return;
    }
    default:
      for (const auto& k : e.kids()) collect_free(k, bound, out);
  }
}

void collect_all(const Expr& e, std::set<std::string>& out) {
  if (e.is(ExprKind::Var) || is_binder(e.kind())) out.insert(e.name());
  for (const auto& k : e.kids()) collect_all(k, out);
}

}  // namespace

std::set<std::string> free_names(const Expr& e) {
  std::set<std::string> bound, out;
  collect_free(e, bound, out);
  return out;
}

std::set<std::string> all_names(const Expr& e) {
  std::set<std::string> out;
  collect_all(e, out);
  return out;
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& subst) {
  if (subst.empty()) return e;
  switch (e.kind()) {
    case ExprKind::Var: {
      auto it = subst.find(e.name());
      return it == subst.end() ? e : it->second;
    }
    case ExprKind::BoolLit:
    case ExprKind::IntLit:
    case ExprKind::FloatLit:
    case ExprKind::StringLit:
      return e;
    case ExprKind::Lambda:
    case ExprKind::Forall:
    case ExprKind::Exists: {
      const std::set<std::string> body_free = free_names(e.kid(0));
      std::map<std::string, Expr> inner;
      for (const auto& [k, v] : subst)
        if (k != e.name() && body_free.count(k)) inner.emplace(k, v);
      if (inner.empty()) return e;
      std::set<std::string> repl_free;
      for (const auto& [k, v] : inner) {
        auto fv = free_names(v);
        repl_free.insert(fv.begin(), fv.end());
      }
      std::string bv = e.name();
      Expr body = e.kid(0);
      if (repl_free.count(bv)) {
        std::set<std::string> taken = all_names(body);
        taken.insert(repl_free.begin(), repl_free.end());
        for (const auto& [k, v] : inner) taken.insert(k);
        const std::string nv = fresh_name(bv, taken);
        body = substitute(body, {{bv, Expr::var(nv, e.loc())}});
        bv = nv;
      }
      return rebind(e, bv, substitute(body, inner));
    }
    default: {
      std::vector<Expr> kids;
      kids.reserve(e.kids().size());
      for (const auto& k : e.kids()) kids.push_back(substitute(k, subst));
      return rebuild(e, std::move(kids));
    }
  }
}

Expr rename(const Expr& e, const std::map<std::string, std::string>& renaming) {
  std::map<std::string, Expr> subst;
  for (const auto& [from, to] : renaming)
    if (from != to) subst.emplace(from, Expr::var(to));
  return substitute(e, subst);
}

Expr beta_reduce(const Expr& e) {
  if (e.kids().empty()) return e;
  std::vector<Expr> kids;
  kids.reserve(e.kids().size());
  for (const auto& k : e.kids()) kids.push_back(beta_reduce(k));
  if (e.is(ExprKind::App) && kids[0].is(ExprKind::Lambda)) {
    const Expr& lam = kids[0];
    return beta_reduce(substitute(lam.kid(0), {{lam.name(), kids[1]}}));
  }
  return rebuild(e, std::move(kids));
}

Spine flatten_app(const Expr& e) {
  std::deque<Expr> args;
  Expr head = e;
  while (head.is(ExprKind::App)) {
    args.push_front(head.kid(1));
    Expr next = head.kid(0);
    head = next;
  }
  return Spine{head, std::vector<Expr>(args.begin(), args.end())};
}

std::string atom_predicate(const Expr& e) {
  Spine s = flatten_app(e);
  if (s.head.is(ExprKind::Var)) return s.head.name();
  return {};
}

std::vector<Expr> conjuncts(const Expr& e) {
  if (!e.is(ExprKind::And)) return {e};
  auto l = conjuncts(e.kid(0));
  auto r = conjuncts(e.kid(1));
  l.insert(l.end(), r.begin(), r.end());
  return l;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  if (!taken.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string c = base + std::to_string(i);
    if (!taken.count(c)) return c;
  }
}

}  // namespace l4
