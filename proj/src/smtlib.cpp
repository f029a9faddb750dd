#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

#include "l4/classical.hpp"
#include "l4/errors.hpp"
#include "l4/expr_util.hpp"

namespace l4 {

namespace {

SExpr atom(std::string a) { return SExpr{std::move(a), {}, false}; }

SExpr list(std::vector<SExpr> xs) { return SExpr{{}, std::move(xs), true}; }

const std::set<std::string>& reserved() {
  static const std::set<std::string> r = {
      "_", "!", "as", "let", "exists", "forall", "match", "par", "and", "or", "not", "ite", "=>",
      "=", "distinct", "true", "false", "Bool", "Int", "Real", "String", "assert", "check-sat",
      "declare-fun", "declare-const", "declare-sort", "define-fun", "get-model", "set-logic",
      "set-option", "declare-datatypes", "NUMERAL", "DECIMAL", "STRING", "BINARY", "HEXADECIMAL"};
  return r;
}

bool simple_symbol(const std::string& s) {
  static const std::string extra = "~!@$%^&*_-+=<>.?/";
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (!std::isalnum(u) && extra.find(c) == std::string::npos) return false;
  }
  return !reserved().count(s);
}

SExpr sym(const std::string& s) {
  if (simple_symbol(s)) return atom(s);
  if (s.find('|') != std::string::npos || s.find('\\') != std::string::npos)
    throw UnsupportedError("name '" + s + "' cannot be written as an SMT-LIB symbol");
  return atom("|" + s + "|");
}

class Emitter {
 public:
  explicit Emitter(const Signature& sig) : sig_(sig) {}

  SExpr type(const LType& t) const {
    switch (t.kind()) {
      case LType::Kind::Boolean: return atom("Bool");
      case LType::Kind::Integer: return atom("Int");
      case LType::Kind::Float: return atom("Real");
      case LType::Kind::String: return atom("String");
      case LType::Kind::Class: return sym(sig_.sort_of(t.name()));
      default: throw UnsupportedError("type " + t.str() + " has no SMT-LIB counterpart");
    }
  }

  SExpr expr(const Expr& e) const {
    switch (e.kind()) {
      case ExprKind::Var: return sym(e.name());
      case ExprKind::BoolLit: return atom(e.bool_value() ? "true" : "false");
      case ExprKind::IntLit: {
        const std::int64_t v = e.int_value();
        if (v < 0) return list({atom("-"), atom(std::to_string(-v))});
        return atom(std::to_string(v));
      }
      case ExprKind::FloatLit: {
        const double v = e.float_value();
        std::ostringstream os;
        os.precision(17);
        os << std::fixed << std::fabs(v);
        std::string s = os.str();
        while (s.size() > 2 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
        if (v < 0) return list({atom("-"), atom(s)});
        return atom(s);
      }
      case ExprKind::StringLit: {
        std::string s = "\"";
        for (char c : e.name()) s += c == '"' ? std::string("\"\"") : std::string(1, c);
        return atom(s + "\"");
      }
      case ExprKind::Not: return list({atom("not"), expr(e.kid(0))});
      case ExprKind::And:
      case ExprKind::Or: {
        std::vector<SExpr> xs{atom(e.is(ExprKind::And) ? "and" : "or")};
        flatten(e, e.kind(), xs);
        return list(std::move(xs));
      }
      case ExprKind::Implies: return list({atom("=>"), expr(e.kid(0)), expr(e.kid(1))});
      case ExprKind::Eq: return list({atom("="), expr(e.kid(0)), expr(e.kid(1))});
      case ExprKind::Cmp: return list({atom(cmp_op_text(e.cmp_op())), expr(e.kid(0)), expr(e.kid(1))});
      case ExprKind::IfThenElse:
        return list({atom("ite"), expr(e.kid(0)), expr(e.kid(1)), expr(e.kid(2))});
      case ExprKind::App: {
        const Spine s = flatten_app(e);
        if (!s.head.is(ExprKind::Var))
          throw UnsupportedError("application of a non-symbol has no SMT-LIB form", e.loc());
        std::vector<SExpr> xs{sym(s.head.name())};
        for (const auto& a : s.args) xs.push_back(expr(a));
        return list(std::move(xs));
      }
      case ExprKind::FieldAccess: return list({sym(e.name()), expr(e.kid(0))});
      case ExprKind::Forall:
      case ExprKind::Exists: return quantifier(e);
      case ExprKind::Lambda:
        throw UnsupportedError("lambda abstraction has no first-order SMT-LIB form", e.loc());
    }
    return atom("");
  }

 private:
  void flatten(const Expr& e, ExprKind k, std::vector<SExpr>& out) const {
    if (e.is(k)) {
      flatten(e.kid(0), k, out);
      flatten(e.kid(1), k, out);
    } else {
      out.push_back(expr(e));
    }
  }

  SExpr quantifier(const Expr& e) const {
    const ExprKind k = e.kind();
    std::vector<SExpr> binders, guards;
    Expr cur = e;
    while (cur.is(k)) {
      const LType& t = cur.binder_type();
      binders.push_back(list({sym(cur.name()), type(t)}));
      if (t.is_class() && !sig_.is_sort(t.name()) && !sig_.is_enum(t.name()))
        guards.push_back(list({sym(char_pred_name(t.name())), sym(cur.name())}));
      cur = cur.kid(0);
    }
    SExpr body = expr(cur);
    if (!guards.empty()) {
      SExpr g = guards.size() == 1 ? guards.front() : [&] {
        std::vector<SExpr> xs{atom("and")};
        xs.insert(xs.end(), guards.begin(), guards.end());
        return list(std::move(xs));
      }();
      body = list({atom(k == ExprKind::Forall ? "=>" : "and"), g, body});
    }
    return list({atom(k == ExprKind::Forall ? "forall" : "exists"), list(std::move(binders)), body});
  }

  const Signature& sig_;
};

bool first_order(const LType& t) {
  for (const auto& a : t.arg_types())
    if (a.is(LType::Kind::Function) || a.is(LType::Kind::Tuple)) return false;
  const LType& r = t.result_type();
  return !r.is(LType::Kind::Tuple);
}

}  // namespace

std::string emit_smtlib(const FormulaSet& fs, const Assertion& a) {
  const Signature& sig = fs.sig;
  const Emitter em(sig);
  std::vector<SExpr> forms;
  forms.push_back(list({atom("set-option"), atom(":produce-models"), atom("true")}));
  forms.push_back(list({atom("set-logic"), atom("ALL")}));
  for (const auto& s : sig.sorts()) {
    if (sig.is_enum(s)) {
      std::vector<SExpr> ctors;
      for (const auto& m : sig.members(s)) ctors.push_back(list({sym(m)}));
      forms.push_back(list({atom("declare-datatypes"), list({list({sym(s), atom("0")})}),
                            list({list(std::move(ctors))})}));
    } else {
      forms.push_back(list({atom("declare-sort"), sym(s), atom("0")}));
    }
  }
  for (const auto& name : sig.symbol_order()) {
    if (sig.enum_of(name)) continue;
    const LType& t = *sig.symbol(name);
    if (!first_order(t)) continue;
    const auto args = t.arg_types();
    if (args.empty()) {
      forms.push_back(list({atom("declare-const"), sym(name), em.type(t)}));
      continue;
    }
    std::vector<SExpr> doms;
    for (const auto& d : args) doms.push_back(em.type(d));
    forms.push_back(
        list({atom("declare-fun"), sym(name), list(std::move(doms)), em.type(t.result_type())}));
  }
  for (const auto& f : fs.formulas)
    forms.push_back(list({atom("assert"), em.expr(beta_reduce(f.expr))}));
  const SExpr goal = em.expr(beta_reduce(a.formula));
  forms.push_back(
      list({atom("assert"), a.mode == AssertMode::Valid ? list({atom("not"), goal}) : goal}));
  forms.push_back(list({atom("check-sat")}));
  forms.push_back(list({atom("get-model")}));
  return print_script(forms);
}

std::vector<SExpr> parse_sexprs(const std::string& text) {
  std::vector<std::vector<SExpr>> stack(1);
  std::size_t i = 0;
  int line = 1;
  auto fail = [&](const std::string& msg) { throw InputError(msg, SourceLoc{line, 0}); };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') ++line;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '(') {
      stack.emplace_back();
      ++i;
    } else if (c == ')') {
      if (stack.size() == 1) fail("unbalanced ')'");
      SExpr l = list(std::move(stack.back()));
      stack.pop_back();
      stack.back().push_back(std::move(l));
      ++i;
    } else if (c == '|' || c == '"') {
      std::size_t j = i + 1;
      for (;;) {
        if (j >= text.size()) fail(c == '|' ? "unterminated quoted symbol" : "unterminated string");
        if (text[j] == '\n') ++line;
        if (text[j] == c) {
          if (c == '"' && j + 1 < text.size() && text[j + 1] == '"') {
            j += 2;
            continue;
          }
          break;
        }
        ++j;
      }
      stack.back().push_back(atom(text.substr(i, j + 1 - i)));
      i = j + 1;
    } else {
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
             text[j] != '(' && text[j] != ')' && text[j] != ';' && text[j] != '"' && text[j] != '|')
        ++j;
      stack.back().push_back(atom(text.substr(i, j - i)));
      i = j;
    }
  }
  if (stack.size() != 1) fail("unbalanced '('");
  return std::move(stack.front());
}

std::string print_sexpr(const SExpr& e) {
  if (!e.is_list) return e.atom;
  std::string out = "(";
  for (std::size_t i = 0; i < e.list.size(); ++i) {
    if (i) out += ' ';
    out += print_sexpr(e.list[i]);
  }
  return out + ")";
}

std::string print_script(const std::vector<SExpr>& forms) {
  std::string out;
  for (const auto& f : forms) out += print_sexpr(f) + "\n";
  return out;
}

}  // namespace l4
