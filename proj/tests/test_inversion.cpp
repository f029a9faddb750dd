#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "generators.hpp"
#include "l4/classical.hpp"
#include "l4/errors.hpp"
#include "l4/inversion.hpp"
#include "l4/parser.hpp"
#include "l4/printer.hpp"
#include "l4/transform.hpp"
#include "oracles.hpp"

using namespace l4;

namespace {

std::vector<Rule> user_rules(const RuleModule& m) {
  std::vector<Rule> out;
  for (const auto& r : m.rules)
    if (!r.system) out.push_back(r);
  return out;
}

// Printed models of a module's rules, no inversion formulas. Only symbols
// the rules mention are interpreted.
std::vector<std::string> models_of(const RuleModule& m, const Bounds& b) {
  const FormulaSet fs = rules_to_formulas(m, {InversionScope::None, {}});
  std::vector<std::string> out;
  for (const auto& i : enumerate_models(fs, b).models) out.push_back(i.to_json());
  return out;
}

std::vector<Expr> disjuncts(const Expr& e) {
  if (!e.is(ExprKind::Or)) return {e};
  auto l = disjuncts(e.kid(0));
  const auto r = disjuncts(e.kid(1));
  l.insert(l.end(), r.begin(), r.end());
  return l;
}

Expr strip_foralls(Expr e) {
  while (e.is(ExprKind::Forall)) e = e.kid(0);
  return e;
}

}  // namespace

TEST_CASE("normalizing moves conclusion expressions into equations") {
  const RuleModule m = fixture::module_file("data/speedlimit.l4");
  const Signature sig(elaborate(m));
  const NormalizedRule n = normalize_rule(sig, *m.find_rule("maxSpCarWorkday"));
  CHECK(n.predicate == "maxSp");
  CHECK(n.arity == 4);
  CHECK(n.params == std::vector<Param>{{"v", LType::cls("Vehicle")},
                                       {"d", LType::cls("Day")},
                                       {"r", LType::cls("Road")},
                                       {"s", LType::integer()}});
  CHECK(print_expr(n.precond) == "isCar v && isWorkday d && s == 90");
  CHECK(print_expr(n.to_rule().postcond) == "maxSp v d r s");
}

TEST_CASE("normalizing quantifies parameters absent from the conclusion") {
  const RuleModule m = fixture::module_text(
      "class A\nclass B\ndecl Pre : A -> B -> Boolean\ndecl P : A -> Boolean\n"
      "rule <r> for x: A, y: B if Pre x y then P x\n");
  const NormalizedRule n = normalize_rule(Signature(m), m.rules[0]);
  CHECK(n.params == std::vector<Param>{{"x", LType::cls("A")}});
  CHECK(print_expr(n.precond) == "exists y: B. Pre x y");
}

TEST_CASE("normalized rules are fixed points") {
  const RuleModule m = fixture::module_text(
      "class A\ndecl P : A -> Boolean\ndecl Q : A -> Boolean\nrule <r> for x: A if Q x then P x\n");
  const Signature sig(m);
  const NormalizedRule n = normalize_rule(sig, m.rules[0]);
  CHECK(n.to_rule().params == m.rules[0].params);
  CHECK(n.to_rule().precond == m.rules[0].precond);
  CHECK(n.to_rule().postcond == m.rules[0].postcond);
  const NormalizedRule again = normalize_rule(sig, n.to_rule());
  CHECK(again.params == n.params);
  CHECK(again.precond == n.precond);
}

TEST_CASE("normalizing duplicate conclusion variables") {
  const RuleModule m = fixture::module_text(
      "class A\ndecl Q : A -> A -> Boolean\ndecl K : A -> Boolean\nrule <r> for x: A if K x then Q x x\n");
  const NormalizedRule n = normalize_rule(Signature(m), m.rules[0]);
  REQUIRE(n.params.size() == 2);
  CHECK(n.params[0].name == "x");
  CHECK(print_expr(n.precond) == "K x && " + n.params[1].name + " == x");
}

TEST_CASE("normalizing requires an atomic conclusion") {
  const RuleModule m = fixture::module_text("decl A : Boolean\ndecl B : Boolean\nrule <r> if A then A && B\n");
  CHECK_THROWS_AS(normalize_rule(Signature(m), m.rules[0]), TransformError);
}

TEST_CASE("normalized rules have the same models as their inputs") {
  const std::string header =
      "class A\nclass B\ndecl Q : A -> A -> Boolean\ndecl R : A -> Integer -> Boolean\n"
      "decl Pre : A -> B -> Boolean\ndecl K : A -> Boolean\ndecl c0 : A\n";
  const std::vector<std::string> conclusions = {"Q x x", "Q x y", "Q y x", "Q c0 x", "R x 1",
                                                "R y 2", "K x",   "K c0",  "R c0 1"};
  const std::vector<std::string> atoms = {"(Pre x z)", "(Pre y z)", "(K y)", "(K x)", "(x == y)"};
  gen::Rng rng(31);
  for (int round = 0; round < 60; ++round) {
    const std::string concl = rng.pick(conclusions);
    const std::string pre = print_expr(gen::prop_formula(rng, atoms, 2));
    const RuleModule m = fixture::module_text(header + "rule <r> for x: A, y: A, z: B if " + pre + " then " + concl + "\n");
    const Signature sig(elaborate(m));
    RuleModule nm = m;
    nm.rules = {normalize_rule(sig, m.rules[0]).to_rule()};
    Bounds b;
    b.sizes = {{"A", rng.range(1, 2)}, {"B", rng.range(1, 2)}};
    b.ints = {1, 2};
    CAPTURE(print_rule(m.rules[0]));
    CAPTURE(print_rule(nm.rules[0]));
    CHECK(models_of(m, b) == models_of(nm, b));
  }
}

TEST_CASE("normalization equivalence with carriers of size three") {
  const RuleModule m = fixture::module_text(
      "class A\ndecl Q : A -> A -> Boolean\ndecl K : A -> Boolean\n"
      "rule <r> for x: A, y: A if K y && not K x then Q x x\n");
  RuleModule nm = m;
  nm.rules = {normalize_rule(Signature(m), m.rules[0]).to_rule()};
  Bounds b;
  b.sizes = {{"A", 3}};
  const auto models = models_of(m, b);
  CHECK(!models.empty());
  CHECK(models == models_of(nm, b));
}

TEST_CASE("inversion without defining rules is the closed-world formula") {
  const RuleModule m = fixture::module_text("class A\ndecl P : A -> Boolean\ndecl Z : Boolean\n");
  const Signature sig(m);
  CHECK(print_expr(inversion_formula(sig, {}, "Z")) == "not Z");
  const Expr inv = inversion_formula(sig, {}, "P");
  REQUIRE(inv.is(ExprKind::Forall));
  CHECK(inv.binder_type() == LType::cls("A"));
  CHECK(print_expr(inv.kid(0)) == "not P " + inv.name());
  CHECK_THROWS_AS(inversion_formula(sig, {}, "Nope"), NameError);

  FormulaSet fs = rules_to_formulas(fixture::module_text("decl Z : Boolean\n"), {InversionScope::AllPredicates, {}});
  REQUIRE(fs.formulas.size() == 1);
  const auto models = enumerate_models(fs, Bounds{}).models;
  REQUIRE(models.size() == 1);
  CHECK(std::get<bool>(models[0].at("Z")) == false);
}

TEST_CASE("inversion of the repaired speed limits has one disjunct per rule") {
  const RuleModule rep = run_pipeline(fixture::module_file("data/speedlimit_repaired.l4"), {}).module;
  const Expr inv = inversion_formula(Signature(rep), rep.rules, "maxSp");
  const Expr body = strip_foralls(inv);
  REQUIRE(body.is(ExprKind::Implies));
  CHECK(print_expr(body.kid(0)) == "maxSp v d r s");
  const auto ds = disjuncts(body.kid(1));
  REQUIRE(ds.size() == 3);
  const std::vector<std::string> speeds = {"s == 90", "s == 130", "s == 320"};
  for (std::size_t i = 0; i < 3; ++i) {
    const std::string text = print_expr(ds[i]);
    CHECK(text.size() >= speeds[i].size());
    CHECK(text.substr(text.size() - speeds[i].size()) == speeds[i]);
  }
  // Under each speed equation, only the disjunct of the matching rule can hold.
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == j) continue;
      const auto atoms = oracle::prop_atoms(ds[j]);
      for (auto v : oracle::assignments(atoms)) {
        for (std::size_t k = 0; k < 3; ++k)
          if (v.count(speeds[k])) v[speeds[k]] = (k == i);
        CHECK_FALSE(oracle::prop_eval(ds[j], v));
      }
    }
}

TEST_CASE("a self-defeating rule inverts to its own negation and is inconsistent") {
  const RuleModule m = fixture::module_text("decl P : Boolean\nrule <r> if not P then P\n");
  CHECK(print_expr(inversion_formula(Signature(m), m.rules, "P")) == "P --> not P");
  const MonotonicityReport mono = check_syntactic_monotonicity(m.rules, "P");
  CHECK_FALSE(mono.monotonic);
  REQUIRE(mono.offending.size() == 1);
  CHECK(mono.offending[0].rule == "r");
  CHECK(mono.offending[0].loc.line == 2);

  FormulaSet fs = rules_to_formulas(m);
  CHECK(fs.inverted == std::vector<std::string>{"P"});
  CHECK(enumerate_models(fs, Bounds{}).models.empty());
  CHECK(enumerate_models(rules_to_formulas(m, {InversionScope::None, {}}), Bounds{}).models.size() == 1);
}

TEST_CASE("syntactic monotonicity examples") {
  const RuleModule m = fixture::module_text(
      "decl P : Boolean\ndecl Q : Boolean\n"
      "rule <a> if P then P\nrule <b> if not (not P && Q) then P\nrule <c> if not (not P && Q) then Q\n");
  CHECK(check_syntactic_monotonicity({m.rules[0]}, "P").monotonic);
  CHECK(check_syntactic_monotonicity({m.rules[1]}, "P").monotonic);
  const MonotonicityReport q = check_syntactic_monotonicity(m.rules, "Q");
  CHECK_FALSE(q.monotonic);
  REQUIRE(q.offending.size() == 1);
  CHECK(q.offending[0].rule == "c");
  CHECK(check_syntactic_monotonicity(m.rules, "P").monotonic);
  CHECK(check_syntactic_monotonicity({}, "P").monotonic);
}

TEST_CASE("repaired speed limits are syntactically monotonic in maxSp") {
  const RuleModule rep = run_pipeline(fixture::module_file("data/speedlimit_repaired.l4"), {}).module;
  CHECK(check_syntactic_monotonicity(rep.rules, "maxSp").monotonic);
  const RuleModule deriv =
      run_pipeline(fixture::module_file("data/speedlimit_repaired.l4"), {RestrictionVariant::ViaDerivability, false})
          .module;
  const MonotonicityReport r = check_syntactic_monotonicity(deriv.rules, "maxSp⁺");
  CHECK_FALSE(r.monotonic);
  CHECK(r.offending.size() == 3);
}

TEST_CASE("monotonicity agrees with an independent polarity count") {
  const std::vector<std::string> atoms = {"P", "Q", "R"};
  gen::Rng rng(37);
  int non_monotone = 0;
  for (int round = 0; round < 500; ++round) {
    const int n = rng.range(1, 3);
    std::string src = "decl P : Boolean\ndecl Q : Boolean\ndecl R : Boolean\n";
    std::vector<Expr> pres;
    for (int i = 0; i < n; ++i) {
      pres.push_back(gen::prop_formula(rng, atoms, 3));
      src += "rule <r" + std::to_string(i) + "> if " + print_expr(pres.back()) + " then " +
             (rng.coin(0.7) ? "P" : "Q") + "\n";
    }
    const RuleModule m = fixture::module_text(src);
    std::size_t bad = 0;
    for (const auto& r : m.rules) {
      if (print_expr(r.postcond) != "P") continue;
      for (int s : oracle::occurrence_signs(r.precond, "P")) bad += s != 1;
    }
    const MonotonicityReport rep = check_syntactic_monotonicity(m.rules, "P");
    CAPTURE(src);
    CHECK(rep.monotonic == (bad == 0));
    CHECK(rep.offending.size() == bad);
    non_monotone += bad > 0;
  }
  CHECK(non_monotone > 50);
}

TEST_CASE("each monotone rule is consistent with the inversion formula") {
  const std::vector<std::string> prop_atoms = {"P", "Q", "R"};
  const std::vector<std::string> unary_atoms = {"(P x)", "(Q x)", "(P c0)", "(R)"};
  gen::Rng rng(41);
  int checked = 0;
  for (int round = 0; round < 800 && checked < 150; ++round) {
    const bool unary = rng.coin();
    std::string src = unary ? "class A\ndecl P : A -> Boolean\ndecl Q : A -> Boolean\ndecl R : Boolean\ndecl c0 : A\n"
                            : "decl P : Boolean\ndecl Q : Boolean\ndecl R : Boolean\n";
    const int n = rng.range(1, 3);
    bool monotone = true;
    for (int i = 0; i < n; ++i) {
      const Expr pre = parse_expr(print_expr(gen::prop_formula(rng, unary ? unary_atoms : prop_atoms, 3)));
      for (int s : oracle::occurrence_signs(pre, "P")) monotone = monotone && s == 1;
      src += "rule <r" + std::to_string(i) + "> " + (unary ? "for x: A " : "") + "if " + print_expr(pre) +
             " then " + (unary ? "P x" : "P") + "\n";
    }
    if (!monotone) continue;
    ++checked;
    const RuleModule m = fixture::module_text(src);
    REQUIRE(check_syntactic_monotonicity(m.rules, "P").monotonic);
    const Expr inv = inversion_formula(Signature(m), m.rules, "P");
    for (const auto& r : m.rules) {
      RuleModule single = m;
      single.rules = {r};
      FormulaSet fs = rules_to_formulas(single, {InversionScope::None, {}});
      fs.formulas.push_back(Formula{"inv:P", inv, false});
      Bounds b;
      if (unary) b.sizes = {{"A", 2}};
      SearchOptions o;
      o.max_models = 1;
      CAPTURE(src);
      CAPTURE(r.name);
      CHECK(enumerate_models(fs, b, o).models.size() == 1);
    }
  }
  CHECK(checked >= 100);
}
