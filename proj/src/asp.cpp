#include "l4/asp.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "l4/errors.hpp"

namespace l4::asp {

namespace {

bool is_integer(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(),
                                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

}  // namespace

bool Term::is_var() const {
  return args.empty() && !name.empty() && std::isupper(static_cast<unsigned char>(name[0]));
}

bool Term::ground() const {
  if (is_var()) return false;
  return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.ground(); });
}

std::string Term::str() const {
  if (args.empty()) return name;
  std::string out = name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) out += (i ? "," : "") + args[i].str();
  return out + ")";
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.name != b.name) {
    const bool ia = is_integer(a.name), ib = is_integer(b.name);
    if (ia && ib && a.name.size() != b.name.size()) return a.name.size() <=> b.name.size();
    if (ia != ib) return ia ? std::strong_ordering::less : std::strong_ordering::greater;
    return a.name <=> b.name;
  }
  return std::lexicographical_compare_three_way(a.args.begin(), a.args.end(), b.args.begin(),
                                                b.args.end());
}

Term constant(const std::string& name) { return Term{name, {}}; }

Term compound(const std::string& name, std::vector<Term> args) {
  return Term{name, std::move(args)};
}

const char* mod_name(ModKind k) {
  switch (k) {
    case ModKind::Despite: return "despite";
    case ModKind::SubjectTo: return "subject_to";
    case ModKind::StrongSubjectTo: return "strong_subject_to";
  }
  return "";
}

const DefRule* Config::rule(int id) const {
  for (const auto& r : rules)
    if (r.id == id) return &r;
  return nullptr;
}

void validate(const Config& c) {
  std::set<int> ids;
  for (const auto& r : c.rules) {
    if (r.id <= 0) throw InputError("rule ids must be positive, got " + std::to_string(r.id));
    if (!ids.insert(r.id).second) throw InputError("duplicate rule id " + std::to_string(r.id));
  }
  for (const auto& m : c.modifiers)
    for (int id : {m.a, m.b})
      if (!ids.count(id))
        throw InputError(std::string(mod_name(m.kind)) + "(" + std::to_string(m.a) + "," +
                         std::to_string(m.b) + ") refers to unknown rule " + std::to_string(id));
  for (const auto& f : c.facts)
    if (!f.ground()) throw InputError("fact " + f.str() + " is not ground");
  for (const auto& k : c.inconsistent) {
    const std::set<Term> atoms(k.begin(), k.end());
    for (const auto& a : atoms)
      if (!a.ground()) throw InputError("inconsistent set member " + a.str() + " is not ground");
    if (atoms.size() < 2)
      throw InputError("an inconsistent set must contain at least 2 atoms");
  }
}

namespace {

struct Tok {
  enum Kind { End, Word, Punct } kind = End;
  std::string text;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) { advance(); }

  const Tok& peek() const { return cur_; }
  Tok take() {
    Tok t = cur_;
    advance();
    return t;
  }
  bool accept(const std::string& p) {
    if (cur_.text != p || cur_.kind == Tok::End) return false;
    advance();
    return true;
  }
  void expect(const std::string& p) {
    if (!accept(p)) fail("expected '" + p + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const std::string found = cur_.kind == Tok::End ? "end of input" : "'" + cur_.text + "'";
    throw InputError(msg + ", found " + found, SourceLoc{cur_.line, cur_.col});
  }

 private:
  void advance() {
    for (;;) {
      while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) step();
      if (i_ < s_.size() && (s_[i_] == '#' || s_[i_] == '%')) {
        while (i_ < s_.size() && s_[i_] != '\n') step();
        continue;
      }
      break;
    }
    cur_ = Tok{};
    cur_.line = line_;
    cur_.col = col_;
    if (i_ >= s_.size()) return;
    const char c = s_[i_];
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      cur_.kind = Tok::Word;
      while (i_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) {
        cur_.text += s_[i_];
        step();
      }
      return;
    }
    cur_.kind = Tok::Punct;
    for (const char* p : {"<-", ":-"}) {
      if (s_.compare(i_, 2, p) == 0) {
        cur_.text = p;
        step();
        step();
        return;
      }
    }
    cur_.text = std::string(1, c);
    step();
  }

  void step() {
    if (s_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  const std::string& s_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
  Tok cur_;
};

Term read_term(Lexer& lx) {
  if (lx.peek().kind != Tok::Word) lx.fail("expected a term");
  Term t{lx.take().text, {}};
  if (lx.accept("(")) {
    do t.args.push_back(read_term(lx));
    while (lx.accept(","));
    lx.expect(")");
  }
  return t;
}

Literal read_literal(Lexer& lx) {
  Literal l;
  if (lx.peek().kind == Tok::Word && lx.peek().text == "not") {
    lx.take();
    l.naf = true;
  }
  l.atom = read_term(lx);
  return l;
}

std::vector<Literal> read_body(Lexer& lx) {
  std::vector<Literal> body;
  do body.push_back(read_literal(lx));
  while (lx.accept(","));
  return body;
}

int read_id(Lexer& lx) {
  const Tok t = lx.peek();
  if (t.kind != Tok::Word || !is_integer(t.text) || t.text.size() > 9) lx.fail("expected a rule id");
  lx.take();
  return std::stoi(t.text);
}

}  // namespace

Config parse_config(const std::string& text) {
  Lexer lx(text);
  Config c;
  while (lx.peek().kind != Tok::End) {
    const Tok kw = lx.peek();
    if (kw.kind != Tok::Word) lx.fail("expected a statement");
    lx.take();
    if (kw.text == "rule") {
      DefRule r;
      r.id = read_id(lx);
      lx.expect(":");
      r.head = read_term(lx);
      if (lx.accept("<-")) r.body = read_body(lx);
      c.rules.push_back(std::move(r));
    } else if (kw.text == "fact" || kw.text == "constants") {
      lx.expect(":");
      auto& out = kw.text == "fact" ? c.facts : c.constants;
      do out.push_back(read_term(lx));
      while (lx.accept(","));
    } else if (kw.text == "modifier") {
      lx.expect(":");
      do {
        const Tok k = lx.peek();
        Modifier m;
        if (k.text == "despite") m.kind = ModKind::Despite;
        else if (k.text == "subject_to") m.kind = ModKind::SubjectTo;
        else if (k.text == "strong_subject_to") m.kind = ModKind::StrongSubjectTo;
        else lx.fail("expected despite, subject_to or strong_subject_to");
        lx.take();
        lx.expect("(");
        m.a = read_id(lx);
        lx.expect(",");
        m.b = read_id(lx);
        lx.expect(")");
        c.modifiers.push_back(m);
      } while (lx.accept(","));
    } else if (kw.text == "inconsistent") {
      lx.expect(":");
      lx.expect("{");
      std::vector<Term> k;
      do k.push_back(read_term(lx));
      while (lx.accept(","));
      lx.expect("}");
      c.inconsistent.push_back(std::move(k));
    } else {
      throw InputError("unknown statement '" + kw.text + "'", SourceLoc{kw.line, kw.col});
    }
    lx.expect(".");
  }
  validate(c);
  return c;
}

namespace {

void vars_of(const Term& t, std::vector<std::string>& out) {
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
    return;
  }
  for (const auto& a : t.args) vars_of(a, out);
}

void constants_of(const Term& t, std::vector<Term>& out) {
  for (const auto& a : t.args) {
    if (a.args.empty() && !a.is_var()) {
      if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
    } else {
      constants_of(a, out);
    }
  }
}

using Subst = std::map<std::string, Term>;

Term substitute(const Term& t, const Subst& s) {
  if (t.is_var()) {
    auto it = s.find(t.name);
    return it == s.end() ? t : it->second;
  }
  Term out{t.name, {}};
  for (const auto& a : t.args) out.args.push_back(substitute(a, s));
  return out;
}

}  // namespace

bool is_ground(const Config& c) {
  for (const auto& r : c.rules) {
    if (!r.head.ground()) return false;
    for (const auto& l : r.body)
      if (!l.atom.ground()) return false;
  }
  return true;
}

Config ground(const Config& c, const std::vector<Term>& constants) {
  if (is_ground(c)) return c;
  Config out = c;
  out.rules.clear();
  out.modifiers.clear();
  std::map<int, std::vector<int>> instances;
  for (const auto& r : c.rules) {
    std::vector<std::string> vars;
    vars_of(r.head, vars);
    for (const auto& l : r.body) vars_of(l.atom, vars);
    if (vars.empty()) {
      out.rules.push_back(r);
      instances[r.id] = {r.id};
      continue;
    }
    auto& ids = instances[r.id];
    if (constants.empty()) continue;
    std::vector<std::size_t> pick(vars.size(), 0);
    for (int k = 1;; ++k) {
      if (k >= 1000)
        throw ResourceLimit("rule " + std::to_string(r.id) + " has more than 999 instances");
      Subst s;
      for (std::size_t v = 0; v < vars.size(); ++v) s[vars[v]] = constants[pick[v]];
      DefRule g{r.id * 1000 + k, substitute(r.head, s), {}};
      for (const auto& l : r.body) g.body.push_back(Literal{substitute(l.atom, s), l.naf});
      ids.push_back(g.id);
      out.rules.push_back(std::move(g));
      std::size_t v = vars.size();
      while (v > 0 && ++pick[v - 1] == constants.size()) pick[--v] = 0;
      if (v == 0) break;
    }
  }
  for (const auto& m : c.modifiers)
    for (int a : instances[m.a])
      for (int b : instances[m.b]) out.modifiers.push_back(Modifier{m.kind, a, b});
  validate(out);
  return out;
}

Config ground(const Config& c) {
  if (is_ground(c)) return c;
  std::vector<Term> consts = c.constants;
  if (consts.empty()) {
    for (const auto& r : c.rules) {
      constants_of(r.head, consts);
      for (const auto& l : r.body) constants_of(l.atom, consts);
    }
    for (const auto& f : c.facts) constants_of(f, consts);
    for (const auto& k : c.inconsistent)
      for (const auto& a : k) constants_of(a, consts);
  }
  return ground(c, consts);
}

std::vector<int> LegalModel::valid_rules() const {
  std::vector<int> out;
  for (const auto& [id, c] : legally_valid) out.push_back(id);
  return out;
}

std::string LegalModel::str() const {
  std::vector<std::string> parts;
  for (const auto& a : is_legal) parts.push_back("is_legal(" + a.str() + ")");
  for (const auto& [id, c] : legally_valid)
    parts.push_back("legally_valid(" + std::to_string(id) + "," + c.str() + ")");
  std::string out = "{";
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
  return out + "}";
}

bool operator<(const LegalModel& a, const LegalModel& b) {
  const auto va = a.valid_rules(), vb = b.valid_rules();
  if (va != vb) return va < vb;
  if (a.is_legal != b.is_legal) return a.is_legal < b.is_legal;
  return a.legally_valid < b.legally_valid;
}

namespace {

class Checker {
 public:
  Checker(const Config& c, const LegalModel& s) : c_(c), s_(s) {
    for (const auto& [id, concl] : s.legally_valid) valid_.insert(id);
  }

  std::optional<std::string> run() const {
    for (const auto& f : c_.facts)
      if (!legal(f)) return "A1: fact " + f.str() + " lacks legal status";
    for (const auto& [id, concl] : s_.legally_valid) {
      const DefRule* r = c_.rule(id);
      if (!r) return "A2: legally_valid refers to unknown rule " + std::to_string(id);
      if (!(r->head == concl))
        return "A2: legally_valid(" + std::to_string(id) + "," + concl.str() +
               ") does not name the conclusion of rule " + std::to_string(id);
      if (!pre(*r)) return "A2: rule " + std::to_string(id) + " is valid but its precondition fails";
      if (!legal(concl)) return "A2: conclusion of valid rule " + std::to_string(id) + " lacks legal status";
    }
    for (const auto& a : s_.is_legal) {
      const bool fact = std::find(c_.facts.begin(), c_.facts.end(), a) != c_.facts.end();
      const bool concluded = std::any_of(s_.legally_valid.begin(), s_.legally_valid.end(),
                                         [&](const auto& v) { return v.second == a; });
      if (!fact && !concluded) return "A3: " + a.str() + " is neither a fact nor a valid conclusion";
    }
    for (const auto& m : c_.modifiers) {
      const std::string inst = std::string(mod_name(m.kind)) + "(" + std::to_string(m.a) + "," +
                               std::to_string(m.b) + ")";
      if (m.kind == ModKind::Despite && pre(*c_.rule(m.b)) && valid_.count(m.a))
        return "A4: " + inst + " holds but rule " + std::to_string(m.a) + " is valid";
      if (m.kind == ModKind::StrongSubjectTo && valid_.count(m.a) && valid_.count(m.b))
        return "A5: " + inst + " holds but rule " + std::to_string(m.b) + " is valid";
      if (m.kind == ModKind::SubjectTo && valid_.count(m.b) && subject_to_fires(m))
        return "A6: " + inst + " holds but rule " + std::to_string(m.b) + " is valid";
    }
    for (const auto& r : c_.rules)
      if (pre(r) && !valid_.count(r.id) && !excluded(r.id))
        return "A7: rule " + std::to_string(r.id) + " is applicable, invalid and not overridden";
    return std::nullopt;
  }

 private:
  bool legal(const Term& a) const { return s_.is_legal.count(a) > 0; }

  bool pre(const DefRule& r) const {
    return std::all_of(r.body.begin(), r.body.end(),
                       [&](const Literal& l) { return legal(l.atom) != l.naf; });
  }

  // Dominating rule m.a is valid and some inconsistent set holds both
  // (distinct) conclusions with everything but the subordinate one legal.
  bool subject_to_fires(const Modifier& m) const {
    if (!valid_.count(m.a)) return false;
    const Term& ci = c_.rule(m.a)->head;
    const Term& cj = c_.rule(m.b)->head;
    if (ci == cj) return false;
    for (const auto& k : c_.inconsistent) {
      if (std::find(k.begin(), k.end(), ci) == k.end()) continue;
      if (std::find(k.begin(), k.end(), cj) == k.end()) continue;
      if (std::all_of(k.begin(), k.end(), [&](const Term& a) { return a == cj || legal(a); }))
        return true;
    }
    return false;
  }

  bool excluded(int id) const {
    for (const auto& m : c_.modifiers) {
      if (m.kind == ModKind::Despite && m.a == id && pre(*c_.rule(m.b))) return true;
      if (m.kind == ModKind::StrongSubjectTo && m.b == id && valid_.count(m.a)) return true;
      if (m.kind == ModKind::SubjectTo && m.b == id && subject_to_fires(m)) return true;
    }
    return false;
  }

  const Config& c_;
  const LegalModel& s_;
  std::set<int> valid_;
};

}  // namespace

std::optional<std::string> legal_model_violation(const Config& c, const LegalModel& s) {
  return Checker(c, s).run();
}

std::vector<LegalModel> legal_models(const Config& c, bool minimal_only, std::size_t max_rules) {
  validate(c);
  if (!is_ground(c)) throw InputError("legal models need a ground configuration");
  const std::size_t n = c.rules.size();
  if (n > max_rules)
    throw ResourceLimit("legal-model enumeration is capped at " + std::to_string(max_rules) +
                        " rules, config has " + std::to_string(n));
  // A1–A3 fix is_legal to the facts plus the valid conclusions, so a
  // candidate is determined by its set of valid rules.
  std::vector<LegalModel> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    LegalModel s;
    s.is_legal.insert(c.facts.begin(), c.facts.end());
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask >> i & 1)) continue;
      s.legally_valid.emplace(c.rules[i].id, c.rules[i].head);
      s.is_legal.insert(c.rules[i].head);
    }
    if (is_legal_model(c, s)) out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  if (!minimal_only) return out;
  auto subset = [](const LegalModel& a, const LegalModel& b) {
    return std::includes(b.is_legal.begin(), b.is_legal.end(), a.is_legal.begin(), a.is_legal.end()) &&
           std::includes(b.legally_valid.begin(), b.legally_valid.end(), a.legally_valid.begin(),
                         a.legally_valid.end());
  };
  std::vector<LegalModel> minimal;
  for (const auto& m : out)
    if (std::none_of(out.begin(), out.end(),
                     [&](const LegalModel& o) { return !(o == m) && subset(o, m); }))
      minimal.push_back(m);
  return minimal;
}

std::string AspRule::str() const {
  std::string out = head.str();
  if (!body.empty()) {
    out += " :- ";
    for (std::size_t i = 0; i < body.size(); ++i)
      out += (i ? ", " : "") + std::string(body[i].naf ? "not " : "") + body[i].atom.str();
  }
  return out + ".";
}

std::vector<AspRule> AspProgram::rules() const {
  std::vector<AspRule> out;
  for (const auto& s : sections) out.insert(out.end(), s.begin(), s.end());
  return out;
}

std::string AspProgram::text() const {
  std::string out;
  for (const auto& s : sections) {
    if (s.empty()) continue;
    if (!out.empty()) out += "\n";
    for (const auto& r : s) out += r.str() + "\n";
  }
  return out;
}

namespace {

Term var(const char* n) { return constant(n); }
Term id_term(int id) { return constant(std::to_string(id)); }
Literal pos(Term t) { return Literal{std::move(t), false}; }
Term is_legal(Term a) { return compound("is_legal", {std::move(a)}); }

}  // namespace

AspProgram emit_asp(const Config& c) {
  validate(c);
  if (!is_ground(c)) throw InputError("the encoding needs a ground configuration");
  AspProgram p;
  std::vector<AspRule> facts, mods, according, opposes;
  for (const auto& f : c.facts) facts.push_back(AspRule{is_legal(f), {}});
  for (const auto& m : c.modifiers)
    mods.push_back(AspRule{compound(mod_name(m.kind), {id_term(m.a), id_term(m.b)}), {}});
  for (const auto& r : c.rules) {
    AspRule a{compound("according_to", {id_term(r.id), r.head}), {}};
    for (const auto& l : r.body) a.body.push_back(Literal{is_legal(l.atom), l.naf});
    according.push_back(std::move(a));
  }
  for (const auto& k : c.inconsistent) {
    std::vector<Term> atoms;
    for (const auto& a : k)
      if (std::find(atoms.begin(), atoms.end(), a) == atoms.end()) atoms.push_back(a);
    for (std::size_t i = 0; i < atoms.size(); ++i)
      for (std::size_t j = i + 1; j < atoms.size(); ++j) {
        AspRule o{compound("opposes", {atoms[i], atoms[j]}), {}};
        for (std::size_t x = 0; x < atoms.size(); ++x)
          if (x != i && x != j) o.body.push_back(pos(is_legal(atoms[x])));
        opposes.push_back(std::move(o));
      }
  }
  const Term R = var("R"), C = var("C"), R1 = var("R1"), C1 = var("C1"), X = var("X"), Y = var("Y");
  auto defeated = compound("defeated", {R, C, R1});
  std::vector<AspRule> scheme = {
      AspRule{defeated,
              {pos(compound("according_to", {R, C})), pos(compound("according_to", {R1, C1})),
               pos(compound("despite", {R, R1}))}},
      AspRule{defeated,
              {pos(compound("according_to", {R, C})), pos(compound("legally_valid", {R1, C1})),
               pos(compound("opposes", {C, C1})), pos(compound("subject_to", {R1, R}))}},
      AspRule{defeated,
              {pos(compound("according_to", {R, C})), pos(compound("legally_valid", {R1, C1})),
               pos(compound("strong_subject_to", {R1, R}))}},
  };
  p.sections = {
      facts,
      mods,
      according,
      opposes,
      {AspRule{compound("opposes", {X, Y}), {pos(compound("opposes", {Y, X}))}}},
      scheme,
      {AspRule{compound("not_legally_valid", {R}), {pos(defeated)}}},
      {AspRule{compound("legally_valid", {R, C}),
               {pos(compound("according_to", {R, C})),
                Literal{compound("not_legally_valid", {R}), true}}}},
      {AspRule{is_legal(C), {pos(compound("legally_valid", {R, C}))}}},
  };
  return p;
}

AspProgram parse_program(const std::string& text) {
  Lexer lx(text);
  std::vector<AspRule> rules;
  while (lx.peek().kind != Tok::End) {
    AspRule r;
    r.head = read_term(lx);
    if (lx.accept(":-")) r.body = read_body(lx);
    lx.expect(".");
    rules.push_back(std::move(r));
  }
  AspProgram p;
  p.sections.push_back(std::move(rules));
  return p;
}

namespace {

bool match(const Term& pattern, const Term& t, Subst& s) {
  if (pattern.is_var()) {
    auto [it, fresh] = s.emplace(pattern.name, t);
    return fresh || it->second == t;
  }
  if (pattern.name != t.name || pattern.args.size() != t.args.size()) return false;
  for (std::size_t i = 0; i < t.args.size(); ++i)
    if (!match(pattern.args[i], t.args[i], s)) return false;
  return true;
}

struct Grounder {
  const std::vector<AspRule>& rules;
  std::size_t max_rules;
  std::map<std::pair<std::string, std::size_t>, std::set<Term>> possible;
  std::size_t count = 0;

  bool add(const Term& a) {
    return possible[{a.name, a.args.size()}].insert(a).second;
  }

  // Every substitution making the positive body literals possible.
  template <class F>
  void join(const AspRule& r, std::size_t i, Subst& s, F&& emit) {
    while (i < r.body.size() && r.body[i].naf) ++i;
    if (i == r.body.size()) {
      emit(s);
      return;
    }
    const Term& pat = r.body[i].atom;
    auto it = possible.find({pat.name, pat.args.size()});
    if (it == possible.end()) return;
    // Copy: emit may add atoms to the same bucket.
    const std::vector<Term> cands(it->second.begin(), it->second.end());
    for (const auto& a : cands) {
      Subst t = s;
      if (match(pat, a, t)) join(r, i + 1, t, emit);
    }
  }

  void check_safe(const AspRule& r) {
    std::vector<std::string> bound, need;
    for (const auto& l : r.body)
      if (!l.naf) vars_of(l.atom, bound);
    vars_of(r.head, need);
    for (const auto& l : r.body)
      if (l.naf) vars_of(l.atom, need);
    for (const auto& v : need)
      if (std::find(bound.begin(), bound.end(), v) == bound.end())
        throw InputError("unsafe variable " + v + " in rule `" + r.str() + "`");
  }

  std::vector<GroundRule> run() {
    for (const auto& r : rules) check_safe(r);
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& r : rules) {
        Subst s;
        join(r, 0, s, [&](const Subst& m) {
          if (add(substitute(r.head, m))) changed = true;
        });
      }
    }
    std::vector<GroundRule> out;
    std::set<std::string> seen;
    for (const auto& r : rules) {
      Subst s;
      join(r, 0, s, [&](const Subst& m) {
        GroundRule g{substitute(r.head, m), {}, {}};
        for (const auto& l : r.body) (l.naf ? g.neg : g.pos).push_back(substitute(l.atom, m));
        std::string key = AspRule{g.head, {}}.str();
        for (const auto& a : g.pos) key += " " + a.str();
        for (const auto& a : g.neg) key += " ~" + a.str();
        if (!seen.insert(key).second) return;
        if (++count > max_rules)
          throw ResourceLimit("grounding exceeded " + std::to_string(max_rules) + " rules");
        out.push_back(std::move(g));
      });
    }
    return out;
  }
};

}  // namespace

std::vector<GroundRule> ground_program(const AspProgram& p, std::size_t max_rules) {
  const auto rules = p.rules();
  return Grounder{rules, max_rules, {}, 0}.run();
}

std::vector<std::set<Term>> answer_sets(const AspProgram& p, std::size_t max_guess_bits) {
  const auto rules = ground_program(p);
  std::map<Term, int> id;
  std::vector<Term> atoms;
  auto intern = [&](const Term& t) {
    auto [it, fresh] = id.emplace(t, static_cast<int>(atoms.size()));
    if (fresh) atoms.push_back(t);
    return it->second;
  };
  struct R {
    int head;
    std::vector<int> pos, neg;
  };
  std::vector<R> g;
  std::set<int> naf;
  for (const auto& r : rules) {
    R x{intern(r.head), {}, {}};
    for (const auto& a : r.pos) x.pos.push_back(intern(a));
    for (const auto& a : r.neg) {
      x.neg.push_back(intern(a));
      naf.insert(x.neg.back());
    }
    g.push_back(std::move(x));
  }
  std::vector<int> guess_atoms(naf.begin(), naf.end());
  std::sort(guess_atoms.begin(), guess_atoms.end(),
            [&](int a, int b) { return atoms[static_cast<std::size_t>(a)] < atoms[static_cast<std::size_t>(b)]; });
  if (guess_atoms.size() > max_guess_bits)
    throw ResourceLimit(std::to_string(guess_atoms.size()) +
                        " atoms occur under negation; the stable-model search is capped at " +
                        std::to_string(max_guess_bits));

  std::vector<std::set<Term>> out;
  std::vector<char> assumed(atoms.size()), in(atoms.size());
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << guess_atoms.size()); ++mask) {
    std::fill(assumed.begin(), assumed.end(), 0);
    for (std::size_t i = 0; i < guess_atoms.size(); ++i)
      if (mask >> i & 1) assumed[static_cast<std::size_t>(guess_atoms[i])] = 1;
    // Least model of the reduct.
    std::fill(in.begin(), in.end(), 0);
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& r : g) {
        if (in[static_cast<std::size_t>(r.head)]) continue;
        if (std::any_of(r.neg.begin(), r.neg.end(), [&](int a) { return assumed[static_cast<std::size_t>(a)]; }))
          continue;
        if (!std::all_of(r.pos.begin(), r.pos.end(), [&](int a) { return in[static_cast<std::size_t>(a)]; }))
          continue;
        in[static_cast<std::size_t>(r.head)] = 1;
        changed = true;
      }
    }
    const bool stable = std::all_of(guess_atoms.begin(), guess_atoms.end(), [&](int a) {
      return in[static_cast<std::size_t>(a)] == assumed[static_cast<std::size_t>(a)];
    });
    if (!stable) continue;
    std::set<Term> s;
    for (std::size_t a = 0; a < atoms.size(); ++a)
      if (in[a]) s.insert(atoms[a]);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

LegalModel project(const std::set<Term>& answer_set) {
  LegalModel m;
  for (const auto& a : answer_set) {
    if (a.name == "is_legal" && a.args.size() == 1) m.is_legal.insert(a.args[0]);
    if (a.name == "legally_valid" && a.args.size() == 2 && is_integer(a.args[0].name) &&
        a.args[0].name.size() <= 9)
      m.legally_valid.emplace(std::stoi(a.args[0].name), a.args[1]);
  }
  return m;
}

bool SoundnessReport::sound() const {
  return std::all_of(entries.begin(), entries.end(), [](const Entry& e) { return !e.violation; });
}

SoundnessReport check_answer_set_soundness(const Config& c) {
  SoundnessReport rep;
  for (auto& s : answer_sets(emit_asp(c))) {
    SoundnessReport::Entry e;
    e.projection = project(s);
    e.violation = legal_model_violation(c, e.projection);
    e.answer_set = std::move(s);
    rep.entries.push_back(std::move(e));
  }
  for (auto& m : legal_models(c))
    if (std::none_of(rep.entries.begin(), rep.entries.end(),
                     [&](const SoundnessReport::Entry& e) { return e.projection == m; }))
      rep.gap.push_back(std::move(m));
  return rep;
}

std::string set_str(const std::set<Term>& atoms) {
  std::string out = "{";
  bool first = true;
  for (const auto& a : atoms) {
    out += (first ? "" : ", ") + a.str();
    first = false;
  }
  return out + "}";
}

}  // namespace l4::asp
