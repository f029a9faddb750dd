#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "generators.hpp"
#include "l4/errors.hpp"
#include "l4/parser.hpp"
#include "l4/printer.hpp"
#include "l4/wellformed.hpp"

using namespace l4;

namespace {

RuleModule parse(const std::string& text) { return parse_module(SourceFile{"t.l4", text}); }

const char* kClasses = R"(
class Vehicle {
   weight: Integer
}
class Car extends Vehicle {
   doors: Integer
}
class Truck extends Vehicle
class SportsCar extends Car
class Day
class Workday extends Day
class Holiday extends Day
class Road
class Highway extends Road
)";

std::vector<std::string> messages(const std::vector<Diagnostic>& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(d.message);
  return out;
}

Expr random_expr(gen::Rng& rng, int depth) {
  static const std::vector<std::string> vars = {"a", "b", "f", "g", "x1"};
  static const std::vector<LType> types = {LType::integer(), LType::boolean(), LType::cls("Car"),
                                           LType::function(LType::cls("Car"), LType::boolean())};
  if (depth <= 0 || rng.coin(0.2)) {
    switch (rng.range(0, 4)) {
      case 0: return Expr::bool_lit(rng.coin());
      case 1: return Expr::int_lit(rng.range(0, 400));
      case 2: return Expr::float_lit(rng.range(0, 40) / 4.0);
      case 3: return Expr::string_lit(rng.coin() ? "car" : "two words");
      default: return Expr::var(rng.pick(vars));
    }
  }
  auto sub = [&] { return random_expr(rng, depth - 1); };
  switch (rng.range(0, 12)) {
    case 0: return Expr::not_(sub());
    case 1: return Expr::and_(sub(), sub());
    case 2: return Expr::or_(sub(), sub());
    case 3: return Expr::implies(sub(), sub());
    case 4: return Expr::eq(sub(), sub());
    case 5: return Expr::cmp(static_cast<CmpOp>(rng.range(0, 3)), sub(), sub());
    case 6: return Expr::app(sub(), sub());
    case 7: return Expr::lambda(rng.pick(vars), rng.pick(types), sub());
    case 8: return Expr::ite(sub(), sub(), sub());
    case 9: return Expr::forall(rng.pick(vars), rng.pick(types), sub());
    case 10: return Expr::exists(rng.pick(vars), rng.pick(types), sub());
    case 11: return Expr::field(sub(), rng.coin() ? "weight" : "doors");
    default: return Expr::apps(Expr::var(rng.pick(vars)), {sub(), sub()});
  }
}

}  // namespace

TEST_CASE("empty file gives an empty module") {
  const RuleModule m = parse("");
  CHECK(m.classes.empty());
  CHECK(m.decls.empty());
  CHECK(m.globals.empty());
  CHECK(m.rules.empty());
  CHECK(m.assertions.empty());
}

TEST_CASE("class definitions of the speed-limit example") {
  const RuleModule m = parse(kClasses);
  std::vector<std::string> names;
  for (const auto& c : m.classes) names.push_back(c.name);
  CHECK(names == std::vector<std::string>{"Vehicle", "Car", "Truck", "SportsCar", "Day", "Workday",
                                          "Holiday", "Road", "Highway"});
  CHECK(m.classes[0].parent == kTopClass);
  CHECK(m.classes[3].parent == "Car");
  REQUIRE(m.classes[0].attributes.size() == 1);
  CHECK(m.classes[0].attributes[0].name == "weight");
  CHECK(m.classes[0].attributes[0].type == LType::integer());
}

TEST_CASE("function declarations are right-nested curried types") {
  const RuleModule m = parse("decl maxSp : Vehicle -> Day -> Road -> Integer -> Boolean");
  REQUIRE(m.decls.size() == 1);
  const LType& t = m.decls[0].type;
  CHECK(t.arg_types() == std::vector<LType>{LType::cls("Vehicle"), LType::cls("Day"),
                                            LType::cls("Road"), LType::integer()});
  CHECK(t.result_type() == LType::boolean());
  CHECK(t.domain() == LType::cls("Vehicle"));
  CHECK(t.codomain().is(LType::Kind::Function));
}

TEST_CASE("zero-argument declarations are instance constants") {
  const RuleModule m = parse("decl instCar : Car\ndecl isCar : Vehicle -> Boolean");
  REQUIRE(m.globals.size() == 1);
  CHECK(m.globals[0].name == "instCar");
  REQUIRE(m.decls.size() == 1);
  CHECK(m.decls[0].name == "isCar");
}

TEST_CASE("restrict annotation with both lists") {
  const RuleModule m = parse(
      "rule <r> {restrict: {subjectTo: a, despite: b}} for x: Car if P x then Q x\n"
      "rule <s> {restrict: {subjectTo: [a, b]}} if P then Q\n");
  const RestrictAnn* ra = m.rules[0].restrict_ann();
  REQUIRE(ra != nullptr);
  CHECK(ra->subject_to == std::vector<std::string>{"a"});
  CHECK(ra->despite == std::vector<std::string>{"b"});
  CHECK(m.rules[1].restrict_ann()->subject_to == std::vector<std::string>{"a", "b"});
}

TEST_CASE("derived annotations carry transformer expressions") {
  const RuleModule m = parse(
      "rule <r> {derived: {apply: {restrictSubjectTo r'Orig [s, t]}}}\n"
      "rule <q> {derived: {apply: {remap p [y: SportsCar] [x := y]}}}\n");
  const DerivedAnn* d = m.rules[0].derived_ann();
  REQUIRE(d != nullptr);
  CHECK(d->apply.kind == TransformExpr::Kind::RestrictSubjectTo);
  CHECK(d->apply.target == "r'Orig");
  CHECK(d->apply.overriders == std::vector<std::string>{"s", "t"});
  const DerivedAnn* r = m.rules[1].derived_ann();
  REQUIRE(r != nullptr);
  CHECK(r->apply.kind == TransformExpr::Kind::Remap);
  CHECK(r->apply.new_params == std::vector<Param>{{"y", LType::cls("SportsCar")}});
  REQUIRE(r->apply.substitution.size() == 1);
  CHECK(r->apply.substitution[0].second == Expr::var("y"));
}

TEST_CASE("a fact is a rule with a true precondition") {
  const RuleModule m = parse("fact <f> for x: Car P x");
  REQUIRE(m.rules.size() == 1);
  CHECK(m.rules[0].precond == Expr::bool_lit(true));
  CHECK(m.rules[0].is_fact());
}

TEST_CASE("assertion modes and rule-set adjustments") {
  const RuleModule m = parse(
      "assert <v> {SMT: {valid}} P\n"
      "assert <s> {SMT: {satisfiable}, rules: {add: r1, delete: [r2, r3]}} P\n");
  CHECK(m.assertions[0].mode == AssertMode::Valid);
  CHECK(m.assertions[1].mode == AssertMode::Satisfiable);
  CHECK(m.assertions[1].add_rules == std::vector<std::string>{"r1"});
  CHECK(m.assertions[1].delete_rules == std::vector<std::string>{"r2", "r3"});
  CHECK_THROWS_AS(parse("assert <x> {SMT: {proved}} P"), SyntaxError);
  CHECK_THROWS_AS(parse("assert <x> {Z3: {valid}} P"), SyntaxError);
}

TEST_CASE("syntax errors report position and expected tokens") {
  try {
    parse("decl P : Boolean\nrule <r> if P Q P");
    FAIL("no error");
  } catch (const SyntaxError& e) {
    CHECK(e.loc().line == 2);
    CHECK(e.loc().col > 0);
    CHECK(!e.expected().empty());
  }
  CHECK_THROWS_AS(parse("rule <r> {restrict: {subjectTo: a}"), SyntaxError);
  try {
    parse("rule <r> {source");
    FAIL("no error");
  } catch (const SyntaxError& e) {
    CHECK(std::string(e.what()).find("unterminated") != std::string::npos);
  }
}

TEST_CASE("comments are discarded") {
  const RuleModule a = parse("# header\ndecl P : Boolean # trailing\nfact <f> P\n");
  const RuleModule b = parse("decl P : Boolean\nfact <f> P\n");
  CHECK(a == b);
}

TEST_CASE("operator precedence: not, comparison, &&, ||, -->") {
  const Expr e = parse_expr("not a && b < c || d --> e --> f");
  CHECK(e == Expr::implies(
                 Expr::or_(Expr::and_(Expr::not_(Expr::var("a")),
                                      Expr::cmp(CmpOp::Lt, Expr::var("b"), Expr::var("c"))),
                           Expr::var("d")),
                 Expr::implies(Expr::var("e"), Expr::var("f"))));
  CHECK(parse_expr("f a b") == Expr::app(Expr::app(Expr::var("f"), Expr::var("a")), Expr::var("b")));
  CHECK(parse_expr("v.weight") == Expr::field(Expr::var("v"), "weight"));
  CHECK(parse_expr("\\x : Car -> isCar x") ==
        Expr::lambda("x", LType::cls("Car"), Expr::app(Expr::var("isCar"), Expr::var("x"))));
}

TEST_CASE("equality ignores source locations") {
  CHECK(Expr::var("a", {1, 1}) == Expr::var("a", {7, 3}));
  CHECK(!(Expr::var("a") == Expr::var("b")));
}

TEST_CASE("printed modules re-parse to equal modules") {
  for (const char* f : {"data/speedlimit.l4", "data/speedlimit_original.l4",
                        "data/speedlimit_repaired.l4", "data/propositional.l4"}) {
    CAPTURE(f);
    const RuleModule m = parse(fixture::read(f));
    const std::string printed = print_module(m);
    const RuleModule again = parse(printed);
    CHECK(again == m);
    CHECK(print_module(again) == printed);
  }
}

TEST_CASE("every expression form round-trips through the printer") {
  gen::Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const Expr e = random_expr(rng, 4);
    const std::string text = print_expr(e);
    CAPTURE(text);
    CHECK(parse_expr(text) == e);
  }
}

TEST_CASE("types round-trip through the printer") {
  for (const char* t : {"Integer", "Car -> Boolean", "(Car -> Boolean) -> Integer",
                        "Car -> Day -> Boolean", "(Car, Integer)", "(Car, Day) -> Float", "String"}) {
    CAPTURE(t);
    CHECK(parse_type(print_type(parse_type(t))) == parse_type(t));
  }
  CHECK(parse_type("A -> B -> C") == LType::function(LType::cls("A"), LType::function(LType::cls("B"), LType::cls("C"))));
}

TEST_CASE("well-formed speed-limit module has no diagnostics") {
  const RuleModule m = parse(fixture::read("data/speedlimit.l4"));
  CHECK(check_well_formed(m).empty());
}

TEST_CASE("free variable is reported once") {
  const RuleModule m = parse(std::string(kClasses) +
                             "decl isCar : Vehicle -> Boolean\ndecl P : Vehicle -> Boolean\n"
                             "rule <r> for v: Vehicle if isCar z then P v\n");
  const auto ds = check_well_formed(m);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].message.find("free variable 'z'") != std::string::npos);
  CHECK(ds[0].loc.line == 17);
}

TEST_CASE("duplicate rule names are reported once") {
  const RuleModule m = parse("decl P : Boolean\nfact <r1> P\nfact <r1> P\n");
  const auto ds = check_well_formed(m);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].message.find("duplicate rule name") != std::string::npos);
}

TEST_CASE("annotation references must resolve") {
  const RuleModule m = parse("decl P : Boolean\nrule <r> {subjectTo: nowhere} if P then P\n");
  const auto ds = check_well_formed(m);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].message.find("nowhere") != std::string::npos);
}

TEST_CASE("two annotation kinds on one rule are rejected") {
  CHECK_THROWS_AS(parse("decl P : Boolean\nrule <r> {source} {subjectTo: q} if P then P\n"), SyntaxError);
}

TEST_CASE("diagnostics are ordered, deterministic and idempotent") {
  const RuleModule m = parse(
      "class A extends Nope\ndecl P : Boolean\ndecl P : Boolean\n"
      "fact <r1> Q\nfact <r1> P\n");
  const auto first = check_well_formed(m);
  CHECK(first.size() >= 3);
  CHECK(std::is_sorted(first.begin(), first.end(),
                       [](const Diagnostic& a, const Diagnostic& b) { return a.loc.before(b.loc); }));
  CHECK(check_well_formed(m) == first);
  CHECK(messages(check_well_formed(parse(print_module(m)))) == messages(first));
}
