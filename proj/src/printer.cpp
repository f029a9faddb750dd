#include "l4/printer.hpp"

#include <charconv>
#include <sstream>

namespace l4 {

namespace {

// Binding strength, loosest first. Mirrors the parser's grammar levels.
enum Level : int {
  kBinder = 0,
  kImplies = 1,
  kOr = 2,
  kAnd = 3,
  kCompare = 4,
  kNot = 5,
  kApp = 6,
  kPostfix = 7,
  kAtom = 8,
};

int level_of(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Lambda:
    case ExprKind::Forall:
    case ExprKind::Exists:
    case ExprKind::IfThenElse: return kBinder;
    case ExprKind::Implies: return kImplies;
    case ExprKind::Or: return kOr;
    case ExprKind::And: return kAnd;
    case ExprKind::Eq:
    case ExprKind::Cmp: return kCompare;
    case ExprKind::Not: return kNot;
    case ExprKind::App: return kApp;
    case ExprKind::FieldAccess: return kPostfix;
    default: return kAtom;
  }
}

std::string float_text(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  const auto e = s.find_first_of("eE");
  if (s.find('.') == std::string::npos) {
    if (e == std::string::npos) s += ".0";
    else s.insert(e, ".0");
  }
  return s;
}

std::string string_text(const std::string& v) {
  std::string s = "\"";
  for (char c : v) {
    if (c == '"' || c == '\\') s += '\\';
    s += c;
  }
  return s + "\"";
}

// A type in a position where a bare arrow would be misread.
std::string atomic_type(const LType& t) {
  if (t.is(LType::Kind::Function)) return "(" + t.str() + ")";
  return t.str();
}

void print(std::ostream& os, const Expr& e, int ctx);

void print_at(std::ostream& os, const Expr& e, int ctx) {
  if (level_of(e) < ctx) {
    os << '(';
    print(os, e, kBinder);
    os << ')';
  } else {
    print(os, e, ctx);
  }
}

void print(std::ostream& os, const Expr& e, int) {
  switch (e.kind()) {
    case ExprKind::Var: os << e.name(); return;
    case ExprKind::BoolLit: os << (e.bool_value() ? "true" : "false"); return;
    case ExprKind::IntLit: os << e.int_value(); return;
    case ExprKind::FloatLit: os << float_text(e.float_value()); return;
    case ExprKind::StringLit: os << string_text(e.name()); return;
    case ExprKind::Not:
      os << "not ";
      print_at(os, e.kid(0), kNot);
      return;
    case ExprKind::And:
      print_at(os, e.kid(0), kAnd);
      os << " && ";
      print_at(os, e.kid(1), kAnd + 1);
      return;
    case ExprKind::Or:
      print_at(os, e.kid(0), kOr);
      os << " || ";
      print_at(os, e.kid(1), kOr + 1);
      return;
    case ExprKind::Implies:
      print_at(os, e.kid(0), kImplies + 1);
      os << " --> ";
      print_at(os, e.kid(1), kImplies);
      return;
    case ExprKind::Eq:
      print_at(os, e.kid(0), kNot);
      os << " == ";
      print_at(os, e.kid(1), kNot);
      return;
    case ExprKind::Cmp:
      print_at(os, e.kid(0), kNot);
      os << ' ' << cmp_op_text(e.cmp_op()) << ' ';
      print_at(os, e.kid(1), kNot);
      return;
    case ExprKind::App:
      print_at(os, e.kid(0), kApp);
      os << ' ';
      print_at(os, e.kid(1), kPostfix);
      return;
    case ExprKind::FieldAccess:
      print_at(os, e.kid(0), kPostfix);
      os << '.' << e.name();
      return;
    case ExprKind::Lambda:
      os << '\\' << e.name() << " : " << atomic_type(e.binder_type()) << " -> ";
      print_at(os, e.kid(0), kBinder);
      return;
    case ExprKind::Forall:
    case ExprKind::Exists:
      os << (e.is(ExprKind::Forall) ? "forall " : "exists ") << e.name() << ": "
         << e.binder_type().str() << ". ";
      print_at(os, e.kid(0), kBinder);
      return;
    case ExprKind::IfThenElse:
      os << "if ";
      print_at(os, e.kid(0), kBinder);
      os << " then ";
      print_at(os, e.kid(1), kBinder);
      os << " else ";
      print_at(os, e.kid(2), kBinder);
      return;
  }
}

std::string name_list(const std::vector<std::string>& names) {
  if (names.size() == 1) return names.front();
  std::string s = "[";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) s += ", ";
    s += names[i];
  }
  return s + "]";
}

std::string bracket_list(const std::vector<std::string>& names) {
  std::string s = "[";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) s += ", ";
    s += names[i];
  }
  return s + "]";
}

std::string params_text(const std::vector<Param>& ps) {
  std::string s;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) s += ", ";
    s += ps[i].name + ": " + ps[i].type.str();
  }
  return s;
}

}  // namespace

std::string print_type(const LType& t) { return t.str(); }

std::string print_expr(const Expr& e) {
  std::ostringstream os;
  print(os, e, kBinder);
  return os.str();
}

std::string print_annotation(const RuleAnnotation& a) {
  if (const auto* r = std::get_if<RestrictAnn>(&a)) {
    std::string s = "{restrict: {";
    bool first = true;
    if (!r->subject_to.empty()) {
      s += "subjectTo: " + name_list(r->subject_to);
      first = false;
    }
    if (!r->despite.empty()) {
      if (!first) s += ", ";
      s += "despite: " + name_list(r->despite);
    }
    return s + "}}";
  }
  if (std::holds_alternative<SourceAnn>(a)) return "{source}";
  const auto& t = std::get<DerivedAnn>(a).apply;
  std::string s = "{derived: {apply: {";
  if (t.kind == TransformExpr::Kind::RestrictSubjectTo) {
    s += "restrictSubjectTo " + t.target + " ";
    s += t.overriders.empty() ? "[]" : name_list(t.overriders);
  } else {
    s += "remap " + t.target + " [" + params_text(t.new_params) + "] [";
    for (std::size_t i = 0; i < t.substitution.size(); ++i) {
      if (i) s += ", ";
      s += t.substitution[i].first + " := " + print_expr(t.substitution[i].second);
    }
    s += "]";
  }
  return s + "}}}";
}

std::string print_rule(const Rule& r) {
  std::ostringstream os;
  const bool fact = r.is_fact() && !r.is_derived();
  os << (fact ? "fact <" : "rule <") << r.name << ">";
  if (r.system) os << "\n  {system}";
  if (r.annotation) os << "\n  " << print_annotation(*r.annotation);
  if (r.is_derived()) return os.str() + "\n";
  if (!r.params.empty()) os << "\n  for " << params_text(r.params);
  if (fact) {
    os << "\n  " << print_expr(r.postcond) << "\n";
    return os.str();
  }
  os << "\n  if " << print_expr(r.precond);
  os << "\n  then " << print_expr(r.postcond) << "\n";
  return os.str();
}

std::string print_assertion(const Assertion& a) {
  std::ostringstream os;
  os << "assert <" << a.name << "> {SMT: {"
     << (a.mode == AssertMode::Valid ? "valid" : "satisfiable") << "}";
  if (!a.add_rules.empty() || !a.delete_rules.empty()) {
    os << ", rules: {";
    if (!a.add_rules.empty()) os << "add: " << bracket_list(a.add_rules);
    if (!a.add_rules.empty() && !a.delete_rules.empty()) os << ", ";
    if (!a.delete_rules.empty()) os << "delete: " << bracket_list(a.delete_rules);
    os << "}";
  }
  os << "}\n  " << print_expr(a.formula) << "\n";
  return os.str();
}

std::string print_module(const RuleModule& m) {
  std::ostringstream os;
  for (const auto& c : m.classes) {
    os << "class " << c.name;
    if (!c.members.empty()) {
      os << " = {";
      for (std::size_t i = 0; i < c.members.size(); ++i) os << (i ? ", " : "") << c.members[i];
      os << "}\n";
      continue;
    }
    if (c.parent != kTopClass) os << " extends " << c.parent;
    if (!c.attributes.empty()) {
      os << " {\n";
      for (const auto& a : c.attributes) os << "  " << a.name << ": " << a.type.str() << "\n";
      os << "}";
    }
    os << "\n";
  }
  auto section = [&os](bool nonempty) {
    if (nonempty && os.tellp() > 0) os << "\n";
  };
  section(!m.decls.empty() || !m.globals.empty());
  for (const auto& d : m.decls) os << "decl " << d.name << " : " << d.type.str() << "\n";
  for (const auto& d : m.globals) os << "decl " << d.name << " : " << d.type.str() << "\n";
  for (const auto& r : m.rules) {
    section(true);
    os << print_rule(r);
  }
  for (const auto& a : m.assertions) {
    section(true);
    os << print_assertion(a);
  }
  return os.str();
}

}  // namespace l4
