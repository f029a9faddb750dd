// Abstract syntax for the L4 rule language subset.
//
// All AST values are immutable once built. Expressions are reference-counted
// trees with structural equality; source locations ride along on every node
// but never take part in equality.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace l4 {

struct SourceLoc {
  int line = 0;
  int col = 0;

  // Locations are diagnostic payload only; two nodes that differ only in
  // where they were parsed compare equal.
  friend bool operator==(const SourceLoc&, const SourceLoc&) { return true; }
  bool before(const SourceLoc& o) const {
    return line != o.line ? line < o.line : col < o.col;
  }
};

inline constexpr const char* kTopClass = "Class";

class LType {
 public:
  enum class Kind { Class, Boolean, Integer, Float, String, Function, Tuple };

  static LType cls(std::string name) { return LType(Kind::Class, std::move(name), {}); }
  static LType boolean() { return LType(Kind::Boolean, {}, {}); }
  static LType integer() { return LType(Kind::Integer, {}, {}); }
  static LType floating() { return LType(Kind::Float, {}, {}); }
  static LType string() { return LType(Kind::String, {}, {}); }
  static LType function(LType dom, LType cod) {
    return LType(Kind::Function, {}, {std::move(dom), std::move(cod)});
  }
  static LType tuple(std::vector<LType> comps) { return LType(Kind::Tuple, {}, std::move(comps)); }
  // T1 -> T2 -> ... -> R, right-nested.
  static LType curried(const std::vector<LType>& doms, LType result);

  Kind kind() const { return kind_; }
  bool is(Kind k) const { return kind_ == k; }
  bool is_class() const { return kind_ == Kind::Class; }
  const std::string& name() const { return name_; }
  const std::vector<LType>& args() const { return args_; }
  const LType& domain() const { return args_.at(0); }
  const LType& codomain() const { return args_.at(1); }

  // Argument types of a curried function type and its final result.
  std::vector<LType> arg_types() const;
  const LType& result_type() const;

  std::string str() const;

  friend bool operator==(const LType& a, const LType& b) {
    return a.kind_ == b.kind_ && a.name_ == b.name_ && a.args_ == b.args_;
  }

 private:
  LType(Kind k, std::string n, std::vector<LType> a)
      : kind_(k), name_(std::move(n)), args_(std::move(a)) {}

  Kind kind_;
  std::string name_;
  std::vector<LType> args_;
};

enum class ExprKind {
  Var, BoolLit, IntLit, FloatLit, StringLit,
  Not, And, Or, Implies, Eq, Cmp,
  App, Lambda, IfThenElse, Forall, Exists, FieldAccess,
};

enum class CmpOp { Lt, Le, Gt, Ge };

const char* cmp_op_text(CmpOp op);

class Expr {
 public:
  struct Node;

  ExprKind kind() const;
  bool is(ExprKind k) const { return kind() == k; }
  // Variable or symbol name, bound variable of a binder, field name, or
  // string literal contents.
  const std::string& name() const;
  bool bool_value() const;
  std::int64_t int_value() const;
  double float_value() const;
  CmpOp cmp_op() const;
  const LType& binder_type() const;
  const std::vector<Expr>& kids() const;
  const Expr& kid(std::size_t i) const { return kids().at(i); }
  SourceLoc loc() const;

  Expr with_loc(SourceLoc loc) const;

  static Expr var(std::string name, SourceLoc loc = {});
  static Expr bool_lit(bool v, SourceLoc loc = {});
  static Expr int_lit(std::int64_t v, SourceLoc loc = {});
  static Expr float_lit(double v, SourceLoc loc = {});
  static Expr string_lit(std::string v, SourceLoc loc = {});
  static Expr not_(Expr e, SourceLoc loc = {});
  static Expr and_(Expr a, Expr b, SourceLoc loc = {});
  static Expr or_(Expr a, Expr b, SourceLoc loc = {});
  static Expr implies(Expr a, Expr b, SourceLoc loc = {});
  static Expr eq(Expr a, Expr b, SourceLoc loc = {});
  static Expr cmp(CmpOp op, Expr a, Expr b, SourceLoc loc = {});
  static Expr app(Expr fn, Expr arg, SourceLoc loc = {});
  static Expr lambda(std::string v, LType t, Expr body, SourceLoc loc = {});
  static Expr ite(Expr c, Expr t, Expr e, SourceLoc loc = {});
  static Expr forall(std::string v, LType t, Expr body, SourceLoc loc = {});
  static Expr exists(std::string v, LType t, Expr body, SourceLoc loc = {});
  static Expr field(Expr e, std::string f, SourceLoc loc = {});

  // f a1 ... an as left-nested applications.
  static Expr apps(Expr fn, const std::vector<Expr>& args);
  // Left fold with &&; empty list gives true.
  static Expr conj(const std::vector<Expr>& es);
  // Left fold with ||; empty list gives false.
  static Expr disj(const std::vector<Expr>& es);

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Expr make(Node n);

  std::shared_ptr<const Node> node_;
};

struct Expr::Node {
  ExprKind kind = ExprKind::BoolLit;
  std::string name;
  bool b = false;
  std::int64_t i = 0;
  double f = 0.0;
  CmpOp op = CmpOp::Lt;
  std::optional<LType> type;
  std::vector<Expr> kids;
  SourceLoc loc;
};

struct Param {
  std::string name;
  LType type = LType::boolean();
  friend bool operator==(const Param&, const Param&) = default;
};

struct RestrictAnn {
  std::vector<std::string> subject_to;
  std::vector<std::string> despite;
  friend bool operator==(const RestrictAnn&, const RestrictAnn&) = default;
};

struct SourceAnn {
  friend bool operator==(const SourceAnn&, const SourceAnn&) = default;
};

struct TransformExpr {
  enum class Kind { RestrictSubjectTo, Remap };
  Kind kind = Kind::RestrictSubjectTo;
  std::string target;
  std::vector<std::string> overriders;                     // RestrictSubjectTo
  std::vector<Param> new_params;                           // Remap
  std::vector<std::pair<std::string, Expr>> substitution;  // Remap

  // Every rule name this expression refers to, target first.
  std::vector<std::string> references() const;
  friend bool operator==(const TransformExpr&, const TransformExpr&) = default;
};

struct DerivedAnn {
  TransformExpr apply;
  friend bool operator==(const DerivedAnn&, const DerivedAnn&) = default;
};

using RuleAnnotation = std::variant<RestrictAnn, SourceAnn, DerivedAnn>;

struct Rule {
  std::string name;
  std::optional<RuleAnnotation> annotation;
  std::vector<Param> params;
  Expr precond = Expr::bool_lit(true);
  Expr postcond = Expr::bool_lit(true);
  // Generated class-inclusion axiom rather than user text.
  bool system = false;
  SourceLoc loc;

  bool is_fact() const;
  bool is_derived() const;
  bool is_source() const;
  const RestrictAnn* restrict_ann() const;
  const DerivedAnn* derived_ann() const;

  friend bool operator==(const Rule&, const Rule&) = default;
};

struct ClassDecl {
  std::string name;
  std::string parent = kTopClass;
  std::vector<Param> attributes;
  // Non-empty for closed enumerated classes: the class has exactly these
  // named inhabitants.
  std::vector<std::string> members;
  SourceLoc loc;
  friend bool operator==(const ClassDecl&, const ClassDecl&) = default;
};

struct FunDecl {
  std::string name;
  LType type = LType::boolean();
  SourceLoc loc;
  friend bool operator==(const FunDecl&, const FunDecl&) = default;
};

enum class AssertMode { Valid, Satisfiable };

struct Assertion {
  std::string name;
  AssertMode mode = AssertMode::Valid;
  std::vector<std::string> add_rules;
  std::vector<std::string> delete_rules;
  Expr formula = Expr::bool_lit(true);
  SourceLoc loc;
  friend bool operator==(const Assertion&, const Assertion&) = default;
};

struct RuleModule {
  std::vector<ClassDecl> classes;
  std::vector<FunDecl> decls;
  std::vector<FunDecl> globals;
  std::vector<Rule> rules;
  std::vector<Assertion> assertions;

  const Rule* find_rule(const std::string& name) const;
  const Assertion* find_assertion(const std::string& name) const;
  const ClassDecl* find_class(const std::string& name) const;
  friend bool operator==(const RuleModule&, const RuleModule&) = default;
};

}  // namespace l4
