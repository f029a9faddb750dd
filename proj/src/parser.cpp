#include "l4/parser.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "l4/errors.hpp"

namespace l4 {

namespace {

enum class Tok { End, Ident, Int, Float, Str, Punct };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceLoc loc;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {
      "class", "extends", "decl",   "rule",   "fact", "assert", "for",   "if",
      "then",  "else",    "not",    "forall", "exists", "true", "false",
  };
  return kw;
}

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\'' || c >= 0x80; }

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Str: return "string literal";
    default: return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.loc = {line_, col_};
      if (pos_ >= s_.size()) {
        out.push_back(t);
        return out;
      }
      const unsigned char c = s_[pos_];
      if (ident_start(c)) {
        std::size_t b = pos_;
        while (pos_ < s_.size() && ident_char(s_[pos_])) advance();
        t.kind = Tok::Ident;
        t.text = s_.substr(b, pos_ - b);
      } else if (std::isdigit(c)) {
        lex_number(t);
      } else if (c == '"') {
        lex_string(t);
      } else {
        lex_punct(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < s_.size()) {
      if (s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool digit_at(std::size_t p) const {
    return p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]));
  }

  void lex_number(Token& t) {
    std::size_t b = pos_;
    while (digit_at(pos_)) advance();
    t.kind = Tok::Int;
    if (pos_ < s_.size() && s_[pos_] == '.' && digit_at(pos_ + 1)) {
      t.kind = Tok::Float;
      advance();
      while (digit_at(pos_)) advance();
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (digit_at(p)) {
        t.kind = Tok::Float;
        while (pos_ < p) advance();
        while (digit_at(pos_)) advance();
      }
    }
    t.text = s_.substr(b, pos_ - b);
  }

  void lex_string(Token& t) {
    t.kind = Tok::Str;
    advance();
    for (;;) {
      if (pos_ >= s_.size()) throw SyntaxError("unterminated string literal", t.loc);
      char ch = s_[pos_];
      if (ch == '"') {
        advance();
        return;
      }
      if (ch == '\\' && pos_ + 1 < s_.size()) {
        advance();
        ch = s_[pos_];
      }
      t.text += ch;
      advance();
    }
  }

  void lex_punct(Token& t) {
    static const char* const multi[] = {"-->", "->", "&&", "||", "==", "<=", ">=", ":="};
    t.kind = Tok::Punct;
    for (const char* m : multi) {
      const std::string_view mv(m);
      if (s_.compare(pos_, mv.size(), mv) == 0) {
        t.text = std::string(mv);
        for (std::size_t i = 0; i < mv.size(); ++i) advance();
        return;
      }
    }
    const char c = s_[pos_];
    if (std::string_view("{}()[]<>:,.\\=").find(c) == std::string_view::npos)
      throw SyntaxError(std::string("unexpected character '") + c + "'", t.loc);
    t.text = std::string(1, c);
    advance();
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  RuleModule module() {
    RuleModule m;
    while (!at_end()) {
      if (is_kw("class")) {
        m.classes.push_back(class_decl());
      } else if (is_kw("decl")) {
        FunDecl d = fun_decl();
        (d.type.is(LType::Kind::Function) ? m.decls : m.globals).push_back(std::move(d));
      } else if (is_kw("rule") || is_kw("fact")) {
        m.rules.push_back(rule_decl());
      } else if (is_kw("assert")) {
        m.assertions.push_back(assertion());
      } else {
        fail({"class", "decl", "rule", "fact", "assert"});
      }
    }
    return m;
  }

  Expr whole_expr() {
    Expr e = expr();
    if (!at_end()) fail({"end of input"});
    return e;
  }

  LType whole_type() {
    LType t = type();
    if (!at_end()) fail({"end of input"});
    return t;
  }

 private:
  // -- token helpers -------------------------------------------------------

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is_kw(const char* kw, std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && peek(k).text == kw;
  }
  bool is_punct(const char* p, std::size_t k = 0) const {
    return peek(k).kind == Tok::Punct && peek(k).text == p;
  }
  bool is_name(std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && !keywords().count(peek(k).text);
  }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::string msg = "expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    msg += ", found " + describe(peek());
    throw SyntaxError(msg, peek().loc, std::move(expected));
  }

  void expect_punct(const char* p) {
    if (!is_punct(p)) fail({std::string("'") + p + "'"});
    take();
  }
  void expect_kw(const char* kw) {
    if (!is_kw(kw)) fail({std::string("'") + kw + "'"});
    take();
  }
  std::string name() {
    if (!is_name()) fail({"identifier"});
    return take().text;
  }

  // -- types ---------------------------------------------------------------

  LType type() {
    LType t = type_atom();
    if (is_punct("->")) {
      take();
      return LType::function(std::move(t), type());
    }
    return t;
  }

  LType type_atom() {
    if (is_punct("(")) {
      take();
      std::vector<LType> comps{type()};
      while (is_punct(",")) {
        take();
        comps.push_back(type());
      }
      expect_punct(")");
      if (comps.size() == 1) return comps.front();
      return LType::tuple(std::move(comps));
    }
    const std::string n = name();
    if (n == "Boolean") return LType::boolean();
    if (n == "Integer") return LType::integer();
    if (n == "Float") return LType::floating();
    if (n == "String") return LType::string();
    return LType::cls(n);
  }

  // -- declarations --------------------------------------------------------

  ClassDecl class_decl() {
    ClassDecl c;
    c.loc = take().loc;
    c.name = name();
    if (is_punct("=")) {
      take();
      const SourceLoc open = peek().loc;
      expect_punct("{");
      c.members.push_back(name());
      while (is_punct(",")) {
        take();
        c.members.push_back(name());
      }
      close_brace(open);
      return c;
    }
    if (is_kw("extends")) {
      take();
      c.parent = name();
    }
    if (is_punct("{")) {
      const SourceLoc open = take().loc;
      while (!is_punct("}")) {
        if (at_end()) throw SyntaxError("unterminated class body", open);
        Param p;
        p.name = name();
        expect_punct(":");
        p.type = type();
        c.attributes.push_back(std::move(p));
        if (is_punct(",")) take();
      }
      take();
    }
    return c;
  }

  FunDecl fun_decl() {
    FunDecl d;
    d.loc = take().loc;
    d.name = name();
    expect_punct(":");
    d.type = type();
    return d;
  }

  std::vector<Param> params() {
    std::vector<Param> ps;
    do {
      if (!ps.empty()) take();
      Param p;
      p.name = name();
      expect_punct(":");
      p.type = type();
      ps.push_back(std::move(p));
    } while (is_punct(","));
    return ps;
  }

  std::string bracket_name() {
    expect_punct("<");
    std::string n = name();
    expect_punct(">");
    return n;
  }

  void close_brace(SourceLoc open) {
    if (at_end()) throw SyntaxError("unterminated annotation braces", open);
    expect_punct("}");
  }

  // names := '[' ... ']' | name {',' name}   (a name followed by ':' ends the list)
  std::vector<std::string> names() {
    std::vector<std::string> out;
    if (is_punct("[")) {
      take();
      if (!is_punct("]")) {
        out.push_back(name());
        while (is_punct(",")) {
          take();
          out.push_back(name());
        }
      }
      expect_punct("]");
      return out;
    }
    out.push_back(name());
    while (is_punct(",") && is_name(1) && !is_punct(":", 2)) {
      take();
      out.push_back(name());
    }
    return out;
  }

  struct RuleHeader {
    std::optional<RuleAnnotation> ann;
    bool system = false;
  };

  void set_kind(RuleHeader& h, RuleAnnotation a, SourceLoc loc) {
    if (h.ann) {
      const bool both_restrict =
          std::holds_alternative<RestrictAnn>(*h.ann) && std::holds_alternative<RestrictAnn>(a);
      if (!both_restrict) throw SyntaxError("a rule carries at most one annotation kind", loc);
      auto& into = std::get<RestrictAnn>(*h.ann);
      const auto& from = std::get<RestrictAnn>(a);
      into.subject_to.insert(into.subject_to.end(), from.subject_to.begin(), from.subject_to.end());
      into.despite.insert(into.despite.end(), from.despite.begin(), from.despite.end());
      return;
    }
    h.ann = std::move(a);
  }

  void restrict_entries(RestrictAnn& r) {
    if (is_kw("subjectTo") || is_name()) {
      for (;;) {
        const Token key = peek();
        if (key.text == "subjectTo") {
          take();
          expect_punct(":");
          auto ns = names();
          r.subject_to.insert(r.subject_to.end(), ns.begin(), ns.end());
        } else if (key.text == "despite") {
          take();
          expect_punct(":");
          auto ns = names();
          r.despite.insert(r.despite.end(), ns.begin(), ns.end());
        } else {
          fail({"subjectTo", "despite"});
        }
        if (!is_punct(",")) break;
        take();
      }
    }
  }

  TransformExpr transform_expr() {
    TransformExpr t;
    if (is_kw("restrictSubjectTo")) {
      take();
      t.kind = TransformExpr::Kind::RestrictSubjectTo;
      t.target = name();
      if (is_punct("[")) {
        t.overriders = names();
      } else {
        while (is_name()) t.overriders.push_back(take().text);
      }
      return t;
    }
    if (is_kw("remap")) {
      take();
      t.kind = TransformExpr::Kind::Remap;
      t.target = name();
      expect_punct("[");
      if (!is_punct("]")) t.new_params = params();
      expect_punct("]");
      expect_punct("[");
      if (!is_punct("]")) {
        for (;;) {
          std::string v = name();
          expect_punct(":=");
          t.substitution.emplace_back(std::move(v), expr());
          if (!is_punct(",")) break;
          take();
        }
      }
      expect_punct("]");
      return t;
    }
    fail({"restrictSubjectTo", "remap"});
  }

  void rule_annotation(RuleHeader& h) {
    const SourceLoc open = take().loc;
    for (;;) {
      if (at_end()) throw SyntaxError("unterminated annotation braces", open);
      const Token key = peek();
      if (key.kind != Tok::Ident) fail({"restrict", "subjectTo", "despite", "source", "derived", "system"});
      take();
      if (key.text == "restrict") {
        expect_punct(":");
        const SourceLoc inner = peek().loc;
        expect_punct("{");
        RestrictAnn r;
        restrict_entries(r);
        close_brace(inner);
        set_kind(h, std::move(r), key.loc);
      } else if (key.text == "subjectTo" || key.text == "despite") {
        expect_punct(":");
        RestrictAnn r;
        (key.text == "subjectTo" ? r.subject_to : r.despite) = names();
        set_kind(h, std::move(r), key.loc);
      } else if (key.text == "source") {
        set_kind(h, SourceAnn{}, key.loc);
      } else if (key.text == "system") {
        h.system = true;
      } else if (key.text == "derived") {
        expect_punct(":");
        const SourceLoc b1 = peek().loc;
        expect_punct("{");
        expect_kw("apply");
        expect_punct(":");
        const SourceLoc b2 = peek().loc;
        expect_punct("{");
        DerivedAnn d{transform_expr()};
        close_brace(b2);
        close_brace(b1);
        set_kind(h, std::move(d), key.loc);
      } else {
        pos_--;
        fail({"restrict", "subjectTo", "despite", "source", "derived", "system"});
      }
      if (is_punct(",")) {
        take();
        continue;
      }
      close_brace(open);
      return;
    }
  }

  bool item_start() const {
    return at_end() || is_kw("class") || is_kw("decl") || is_kw("rule") || is_kw("fact") ||
           is_kw("assert");
  }

  Rule rule_decl() {
    Rule r;
    const bool fact = is_kw("fact");
    r.loc = take().loc;
    r.name = bracket_name();
    RuleHeader h;
    while (is_punct("{")) rule_annotation(h);
    r.annotation = std::move(h.ann);
    r.system = h.system;
    if (r.is_derived()) {
      if (!item_start()) throw SyntaxError("derived rule '" + r.name + "' cannot have a body", peek().loc);
      return r;
    }
    if (is_kw("for")) {
      take();
      r.params = params();
    }
    if (fact) {
      r.postcond = expr();
      return r;
    }
    if (is_kw("if")) {
      take();
      r.precond = expr();
    }
    expect_kw("then");
    r.postcond = expr();
    return r;
  }

  Assertion assertion() {
    Assertion a;
    a.loc = take().loc;
    a.name = bracket_name();
    if (is_punct("{")) {
      const SourceLoc open = take().loc;
      for (;;) {
        if (at_end()) throw SyntaxError("unterminated annotation braces", open);
        if (is_kw("SMT")) {
          take();
          expect_punct(":");
          const SourceLoc inner = peek().loc;
          expect_punct("{");
          if (is_kw("valid")) a.mode = AssertMode::Valid;
          else if (is_kw("satisfiable")) a.mode = AssertMode::Satisfiable;
          else fail({"valid", "satisfiable"});
          take();
          close_brace(inner);
        } else if (is_kw("rules")) {
          take();
          expect_punct(":");
          const SourceLoc inner = peek().loc;
          expect_punct("{");
          for (;;) {
            if (is_kw("add")) {
              take();
              expect_punct(":");
              a.add_rules = names();
            } else if (is_kw("delete")) {
              take();
              expect_punct(":");
              a.delete_rules = names();
            } else {
              fail({"add", "delete"});
            }
            if (!is_punct(",")) break;
            take();
          }
          close_brace(inner);
        } else {
          fail({"SMT", "rules"});
        }
        if (is_punct(",")) {
          take();
          continue;
        }
        close_brace(open);
        break;
      }
    }
    a.formula = expr();
    return a;
  }

  // -- expressions ---------------------------------------------------------

  Expr expr() { return implication(); }

  Expr implication() {
    Expr lhs = disjunction();
    if (is_punct("-->")) {
      const SourceLoc loc = take().loc;
      return Expr::implies(lhs, implication(), loc);
    }
    return lhs;
  }

  Expr disjunction() {
    Expr e = conjunction();
    while (is_punct("||")) {
      const SourceLoc loc = take().loc;
      e = Expr::or_(e, conjunction(), loc);
    }
    return e;
  }

  Expr conjunction() {
    Expr e = comparison();
    while (is_punct("&&")) {
      const SourceLoc loc = take().loc;
      e = Expr::and_(e, comparison(), loc);
    }
    return e;
  }

  Expr comparison() {
    Expr lhs = unary();
    static const std::pair<const char*, CmpOp> ops[] = {
        {"<", CmpOp::Lt}, {"<=", CmpOp::Le}, {">", CmpOp::Gt}, {">=", CmpOp::Ge}};
    if (is_punct("==")) {
      const SourceLoc loc = take().loc;
      return Expr::eq(lhs, unary(), loc);
    }
    for (const auto& [text, op] : ops) {
      if (is_punct(text)) {
        const SourceLoc loc = take().loc;
        return Expr::cmp(op, lhs, unary(), loc);
      }
    }
    return lhs;
  }

  Expr unary() {
    if (is_kw("not")) {
      const SourceLoc loc = take().loc;
      return Expr::not_(unary(), loc);
    }
    return application();
  }

  bool arg_start() const {
    const Token& t = peek();
    if (t.kind == Tok::Int || t.kind == Tok::Float || t.kind == Tok::Str) return true;
    if (t.kind == Tok::Punct) return t.text == "(";
    if (t.kind == Tok::Ident) return is_name() || t.text == "true" || t.text == "false";
    return false;
  }

  Expr application() {
    Expr e = postfix();
    while (arg_start()) {
      const SourceLoc loc = peek().loc;
      e = Expr::app(e, postfix(), loc);
    }
    return e;
  }

  Expr postfix() {
    Expr e = primary();
    while (is_punct(".") && is_name(1)) {
      const SourceLoc loc = take().loc;
      e = Expr::field(e, take().text, loc);
    }
    return e;
  }

  Expr primary() {
    const Token t = peek();
    switch (t.kind) {
      case Tok::Int: {
        take();
        std::int64_t v = 0;
        auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (res.ec != std::errc()) throw SyntaxError("integer literal out of range", t.loc);
        return Expr::int_lit(v, t.loc);
      }
      case Tok::Float:
        take();
        return Expr::float_lit(std::stod(t.text), t.loc);
      case Tok::Str:
        take();
        return Expr::string_lit(t.text, t.loc);
      case Tok::Punct:
        if (t.text == "(") {
          take();
          Expr e = expr();
          expect_punct(")");
          return e;
        }
        if (t.text == "\\") {
          take();
          std::string v = name();
          expect_punct(":");
          LType ty = type_atom();
          expect_punct("->");
          return Expr::lambda(std::move(v), std::move(ty), expr(), t.loc);
        }
        break;
      case Tok::Ident:
        if (t.text == "true" || t.text == "false") {
          take();
          return Expr::bool_lit(t.text == "true", t.loc);
        }
        if (t.text == "forall" || t.text == "exists") {
          take();
          std::string v = name();
          expect_punct(":");
          LType ty = type();
          expect_punct(".");
          Expr body = expr();
          return t.text == "forall" ? Expr::forall(std::move(v), std::move(ty), body, t.loc)
                                    : Expr::exists(std::move(v), std::move(ty), body, t.loc);
        }
        if (t.text == "if") {
          take();
          Expr c = expr();
          expect_kw("then");
          Expr th = expr();
          expect_kw("else");
          return Expr::ite(c, th, expr(), t.loc);
        }
        if (is_name()) {
          take();
          return Expr::var(t.text, t.loc);
        }
        break;
      default: break;
    }
    fail({"expression"});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

RuleModule parse_module(const SourceFile& src) {
  Parser p(Lexer(src.text).run());
  return p.module();
}

Expr parse_expr(const std::string& text) {
  Parser p(Lexer(text).run());
  return p.whole_expr();
}

LType parse_type(const std::string& text) {
  Parser p(Lexer(text).run());
  return p.whole_type();
}

SourceFile read_source(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return SourceFile{path, ss.str()};
}

}  // namespace l4
