#include "l4/ast.hpp"

#include <sstream>

#include "l4/errors.hpp"

namespace l4 {

LType LType::curried(const std::vector<LType>& doms, LType result) {
  LType t = std::move(result);
  for (auto it = doms.rbegin(); it != doms.rend(); ++it) t = function(*it, std::move(t));
  return t;
}

std::vector<LType> LType::arg_types() const {
  std::vector<LType> out;
  const LType* t = this;
  while (t->kind_ == Kind::Function) {
    out.push_back(t->domain());
    t = &t->codomain();
  }
  return out;
}

const LType& LType::result_type() const {
  const LType* t = this;
  while (t->kind_ == Kind::Function) t = &t->codomain();
  return *t;
}

std::string LType::str() const {
  switch (kind_) {
    case Kind::Class: return name_;
    case Kind::Boolean: return "Boolean";
    case Kind::Integer: return "Integer";
    case Kind::Float: return "Float";
    case Kind::String: return "String";
    case Kind::Function: {
      std::string d = domain().str();
      if (domain().is(Kind::Function)) d = "(" + d + ")";
      return d + " -> " + codomain().str();
    }
    case Kind::Tuple: {
      std::string s = "(";
      for (std::size_t i = 0; i < args_.size(); ++i) {
        if (i) s += ", ";
        s += args_[i].str();
      }
      return s + ")";
    }
  }
  return "?";
}

const char* cmp_op_text(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

ExprKind Expr::kind() const { return node_->kind; }
const std::string& Expr::name() const { return node_->name; }
bool Expr::bool_value() const { return node_->b; }
std::int64_t Expr::int_value() const { return node_->i; }
double Expr::float_value() const { return node_->f; }
CmpOp Expr::cmp_op() const { return node_->op; }
const LType& Expr::binder_type() const { return *node_->type; }
const std::vector<Expr>& Expr::kids() const { return node_->kids; }
SourceLoc Expr::loc() const { return node_->loc; }

Expr Expr::with_loc(SourceLoc loc) const {
  Node n = *node_;
  n.loc = loc;
  return make(std::move(n));
}

Expr Expr::make(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }

namespace {

Expr::Node node(ExprKind k, SourceLoc loc, std::vector<Expr> kids = {}) {
  Expr::Node n;
  n.kind = k;
  n.loc = loc;
  n.kids = std::move(kids);
  return n;
}

}  // namespace

Expr Expr::var(std::string name, SourceLoc loc) {
  Node n = node(ExprKind::Var, loc);
  n.name = std::move(name);
  return make(std::move(n));
}

Expr Expr::bool_lit(bool v, SourceLoc loc) {
  Node n = node(ExprKind::BoolLit, loc);
  n.b = v;
  return make(std::move(n));
}

Expr Expr::int_lit(std::int64_t v, SourceLoc loc) {
  Node n = node(ExprKind::IntLit, loc);
  n.i = v;
  return make(std::move(n));
}

Expr Expr::float_lit(double v, SourceLoc loc) {
  Node n = node(ExprKind::FloatLit, loc);
  n.f = v;
  return make(std::move(n));
}

Expr Expr::string_lit(std::string v, SourceLoc loc) {
  Node n = node(ExprKind::StringLit, loc);
  n.name = std::move(v);
  return make(std::move(n));
}

Expr Expr::not_(Expr e, SourceLoc loc) { return make(node(ExprKind::Not, loc, {std::move(e)})); }
Expr Expr::and_(Expr a, Expr b, SourceLoc loc) {
  return make(node(ExprKind::And, loc, {std::move(a), std::move(b)}));
}
Expr Expr::or_(Expr a, Expr b, SourceLoc loc) {
  return make(node(ExprKind::Or, loc, {std::move(a), std::move(b)}));
}
Expr Expr::implies(Expr a, Expr b, SourceLoc loc) {
  return make(node(ExprKind::Implies, loc, {std::move(a), std::move(b)}));
}
Expr Expr::eq(Expr a, Expr b, SourceLoc loc) {
  return make(node(ExprKind::Eq, loc, {std::move(a), std::move(b)}));
}
Expr Expr::cmp(CmpOp op, Expr a, Expr b, SourceLoc loc) {
  Node n = node(ExprKind::Cmp, loc, {std::move(a), std::move(b)});
  n.op = op;
  return make(std::move(n));
}
Expr Expr::app(Expr fn, Expr arg, SourceLoc loc) {
  return make(node(ExprKind::App, loc, {std::move(fn), std::move(arg)}));
}

Expr Expr::lambda(std::string v, LType t, Expr body, SourceLoc loc) {
  Node n = node(ExprKind::Lambda, loc, {std::move(body)});
  n.name = std::move(v);
  n.type = std::move(t);
  return make(std::move(n));
}

Expr Expr::ite(Expr c, Expr t, Expr e, SourceLoc loc) {
  return make(node(ExprKind::IfThenElse, loc, {std::move(c), std::move(t), std::move(e)}));
}

Expr Expr::forall(std::string v, LType t, Expr body, SourceLoc loc) {
  Node n = node(ExprKind::Forall, loc, {std::move(body)});
  n.name = std::move(v);
  n.type = std::move(t);
  return make(std::move(n));
}

Expr Expr::exists(std::string v, LType t, Expr body, SourceLoc loc) {
  Node n = node(ExprKind::Exists, loc, {std::move(body)});
  n.name = std::move(v);
  n.type = std::move(t);
  return make(std::move(n));
}

Expr Expr::field(Expr e, std::string f, SourceLoc loc) {
  Node n = node(ExprKind::FieldAccess, loc, {std::move(e)});
  n.name = std::move(f);
  return make(std::move(n));
}

Expr Expr::apps(Expr fn, const std::vector<Expr>& args) {
  Expr e = std::move(fn);
  for (const auto& a : args) e = app(e, a, e.loc());
  return e;
}

Expr Expr::conj(const std::vector<Expr>& es) {
  if (es.empty()) return bool_lit(true);
  Expr e = es.front();
  for (std::size_t i = 1; i < es.size(); ++i) e = and_(e, es[i], e.loc());
  return e;
}

Expr Expr::disj(const std::vector<Expr>& es) {
  if (es.empty()) return bool_lit(false);
  Expr e = es.front();
  for (std::size_t i = 1; i < es.size(); ++i) e = or_(e, es[i], e.loc());
  return e;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case ExprKind::Var:
    case ExprKind::StringLit:
    case ExprKind::FieldAccess:
      if (x.name != y.name) return false;
      break;
    case ExprKind::BoolLit: return x.b == y.b;
    case ExprKind::IntLit: return x.i == y.i;
    case ExprKind::FloatLit: return x.f == y.f;
    case ExprKind::Cmp:
      if (x.op != y.op) return false;
      break;
    case ExprKind::Lambda:
    case ExprKind::Forall:
    case ExprKind::Exists:
      if (x.name != y.name || !(*x.type == *y.type)) return false;
      break;
    default: break;
  }
  return x.kids == y.kids;
}

std::vector<std::string> TransformExpr::references() const {
  std::vector<std::string> out{target};
  if (kind == Kind::RestrictSubjectTo) out.insert(out.end(), overriders.begin(), overriders.end());
  return out;
}

bool Rule::is_fact() const { return precond.is(ExprKind::BoolLit) && precond.bool_value(); }
bool Rule::is_derived() const { return derived_ann() != nullptr; }
bool Rule::is_source() const {
  return annotation && std::holds_alternative<SourceAnn>(*annotation);
}
const RestrictAnn* Rule::restrict_ann() const {
  return annotation ? std::get_if<RestrictAnn>(&*annotation) : nullptr;
}
const DerivedAnn* Rule::derived_ann() const {
  return annotation ? std::get_if<DerivedAnn>(&*annotation) : nullptr;
}

const Rule* RuleModule::find_rule(const std::string& name) const {
  for (const auto& r : rules)
    if (r.name == name) return &r;
  return nullptr;
}

const Assertion* RuleModule::find_assertion(const std::string& name) const {
  for (const auto& a : assertions)
    if (a.name == name) return &a;
  return nullptr;
}

const ClassDecl* RuleModule::find_class(const std::string& name) const {
  for (const auto& c : classes)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {
std::string cycle_message(const std::vector<std::string>& cycle) {
  std::string s = "rule dependency cycle: ";
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (i) s += " -> ";
    s += cycle[i];
  }
  return s;
}
}  // namespace

CycleError::CycleError(std::vector<std::string> cycle)
    : Error(cycle_message(cycle)), cycle_(std::move(cycle)) {}

std::string format_loc(SourceLoc loc) {
  std::ostringstream os;
  os << loc.line << ":" << loc.col;
  return os.str();
}

}  // namespace l4
