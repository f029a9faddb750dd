#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "generators.hpp"
#include "l4/classical.hpp"
#include "l4/errors.hpp"
#include "l4/parser.hpp"
#include "l4/printer.hpp"
#include "l4/transform.hpp"
#include "oracles.hpp"

using namespace l4;

namespace {

Bounds singletons() {
  Bounds b;
  b.sizes = {{"Vehicle", 1}, {"Day", 1}, {"Road", 1}};
  return b;
}

const Formula* origin(const FormulaSet& fs, const std::string& o) {
  for (const auto& f : fs.formulas)
    if (f.origin == o) return &f;
  return nullptr;
}

RuleModule repaired_precond() {
  return run_pipeline(fixture::module_file("data/speedlimit_repaired.l4"), {}).module;
}

const RuleModule& props() {
  static const RuleModule m = fixture::module_text("decl P : Boolean\ndecl Q : Boolean\ndecl R : Boolean\n");
  return m;
}

FormulaSet prop_set(const std::vector<Expr>& fs) {
  FormulaSet out{Signature(props()), {}, {}};
  for (std::size_t i = 0; i < fs.size(); ++i) out.formulas.push_back({"f" + std::to_string(i), fs[i], false});
  return out;
}

std::set<std::string> prop_models(const FormulaSet& fs) {
  SearchOptions o;
  o.extra_symbols = {"P", "Q", "R"};
  std::set<std::string> out;
  for (const auto& m : enumerate_models(fs, Bounds{}, o).models) {
    std::string key;
    for (const char* a : {"P", "Q", "R"}) key += std::get<bool>(m.at(a)) ? '1' : '0';
    out.insert(key);
  }
  return out;
}

}  // namespace

TEST_CASE("rules become universally closed implications") {
  const RuleModule m = fixture::module_file("data/speedlimit.l4");
  const FormulaSet fs = rules_to_formulas(m);
  REQUIRE(origin(fs, "maxSpCarWorkday") != nullptr);
  CHECK(print_expr(origin(fs, "maxSpCarWorkday")->expr) ==
        "forall v: Vehicle. forall d: Day. forall r: Road. isCar v && isWorkday d --> maxSp v d r 90");
  CHECK_FALSE(origin(fs, "maxSpCarWorkday")->background);
  REQUIRE(origin(fs, "SportsCar'extends'Car") != nullptr);
  CHECK(origin(fs, "SportsCar'extends'Car")->background);
  CHECK(fs.inverted == std::vector<std::string>{"maxSp"});
  CHECK(print_expr(origin(fs, "type:instCar")->expr) == "isCar instCar");
}

TEST_CASE("facts drop the trivial antecedent") {
  const RuleModule m = fixture::module_text("class A\ndecl P : A -> Boolean\nfact <f> for x: A P x\n");
  const FormulaSet fs = rules_to_formulas(m, {InversionScope::None, {}});
  CHECK(print_expr(origin(fs, "f")->expr) == "forall x: A. P x");
}

TEST_CASE("inversion scopes") {
  const RuleModule m = fixture::module_text("decl P : Boolean\ndecl Q : Boolean\nrule <r> if Q then P\n");
  CHECK(rules_to_formulas(m, {InversionScope::None, {}}).inverted.empty());
  CHECK(rules_to_formulas(m, {InversionScope::Transformable, {}}).inverted == std::vector<std::string>{"P"});
  const FormulaSet all = rules_to_formulas(m, {InversionScope::AllPredicates, {}});
  CHECK(all.inverted == std::vector<std::string>{"P", "Q"});
  CHECK(print_expr(origin(all, "inv:Q")->expr) == "not Q");
  CHECK(print_expr(origin(all, "inv:P")->expr) == "P --> Q");
}

TEST_CASE("deleted rules leave the rule set and the inversion formulas") {
  const RuleModule m = fixture::module_text(
      "decl P : Boolean\ndecl Q : Boolean\nrule <r1> if Q then P\nrule <r2> if not Q then P\n"
      "assert <a> {SMT: {valid}, rules: {delete: r2}} P --> Q\n");
  const FormulaOptions o = options_for(m, m.assertions[0]);
  CHECK(o.delete_rules == std::vector<std::string>{"r2"});
  const FormulaSet fs = rules_to_formulas(m, o);
  CHECK(origin(fs, "r2") == nullptr);
  CHECK(print_expr(origin(fs, "inv:P")->expr) == "P --> Q");
  CHECK(check_assertion(fs, m.assertions[0], Bounds{}).status == AssertionResult::Status::Valid);
  CHECK(check_assertion(rules_to_formulas(m), m.assertions[0], Bounds{}).status ==
        AssertionResult::Status::CounterModel);

  Assertion bad = m.assertions[0];
  bad.delete_rules = {"nope"};
  CHECK_THROWS_AS(options_for(m, bad), NameError);
}

TEST_CASE("enumerating forced and contradictory tables") {
  const RuleModule m = fixture::module_text("class A\ndecl P : A -> Boolean\ndecl Z : Boolean\nfact <f> for x: A P x\n");
  Bounds b;
  b.sizes = {{"A", 1}};
  const auto r = enumerate_models(rules_to_formulas(m, {InversionScope::None, {}}), b);
  REQUIRE(r.models.size() == 1);
  CHECK(r.models[0].carriers.at("A").size() == 1);
  CHECK(std::get<bool>(r.models[0].at("P", {r.models[0].carriers.at("A")[0]})));

  CHECK(prop_models(prop_set({parse_expr("P == not P")})).empty());
  CHECK(prop_models(prop_set({parse_expr("P --> not P"), parse_expr("not P --> P")})).empty());
}

TEST_CASE("enumeration matches truth tables on propositional sets") {
  const std::vector<std::string> atoms = {"P", "Q", "R"};
  gen::Rng rng(43);
  for (int round = 0; round < 300; ++round) {
    std::vector<Expr> fs;
    const int n = rng.range(1, 3);
    for (int i = 0; i < n; ++i) fs.push_back(gen::prop_formula(rng, atoms, 3));
    std::set<std::string> expect;
    for (const auto& v : oracle::assignments(atoms)) {
      bool ok = true;
      for (const auto& f : fs) ok = ok && oracle::prop_eval(f, v);
      if (ok) expect.insert(std::string{v.at("P") ? '1' : '0', v.at("Q") ? '1' : '0', v.at("R") ? '1' : '0'});
    }
    CHECK(prop_models(prop_set(fs)) == expect);
  }
}

TEST_CASE("assertion checking agrees with enumeration of the negated or plain assertion") {
  const std::vector<std::string> atoms = {"P", "Q", "R"};
  gen::Rng rng(47);
  for (int round = 0; round < 200; ++round) {
    const Expr rule = gen::prop_formula(rng, atoms, 2);
    const Expr goal = gen::prop_formula(rng, atoms, 2);
    const FormulaSet fs = prop_set({rule});
    Assertion a;
    a.name = "a";
    a.formula = goal;
    a.mode = AssertMode::Valid;
    const auto valid = check_assertion(fs, a, Bounds{});
    const bool has_counter = !prop_models(prop_set({rule, Expr::not_(goal)})).empty();
    CHECK((valid.status == AssertionResult::Status::CounterModel) == has_counter);
    CHECK((valid.status == AssertionResult::Status::Valid) == !has_counter);
    CHECK(valid.model.has_value() == has_counter);

    a.mode = AssertMode::Satisfiable;
    const auto sat = check_assertion(fs, a, Bounds{});
    const bool has_model = !prop_models(prop_set({rule, goal})).empty();
    CHECK((sat.status == AssertionResult::Status::Satisfiable) == has_model);
    CHECK((sat.status == AssertionResult::Status::Unsatisfiable) == !has_model);
  }
}

TEST_CASE("functionality of the speed limit") {
  const RuleModule rep = repaired_precond();
  const Assertion& a = *rep.find_assertion("maxSpFunctional");

  const auto with_inv = check_assertion(rules_to_formulas(rep), a, singletons());
  CHECK(with_inv.status == AssertionResult::Status::Valid);
  CHECK_FALSE(with_inv.model.has_value());

  const auto without = check_assertion(rules_to_formulas(rep, {InversionScope::None, {}}), a, singletons());
  CHECK(without.status == AssertionResult::Status::CounterModel);

  const RuleModule orig = fixture::module_file("data/speedlimit.l4");
  const auto r = check_assertion(rules_to_formulas(orig), *orig.find_assertion("maxSpFunctional"), singletons());
  REQUIRE(r.status == AssertionResult::Status::CounterModel);
  const Interpretation& m = *r.model;
  const Value car = m.at("instCar"), day = m.at("instDay"), road = m.at("instRoad");
  CHECK(std::get<bool>(m.at("isCar", {car})));
  CHECK(std::get<bool>(m.at("isWorkday", {day})));
  CHECK(std::get<bool>(m.at("isHighway", {road})));
  const std::set<std::int64_t> speeds = {std::get<std::int64_t>(m.at("instSpeed1")),
                                         std::get<std::int64_t>(m.at("instSpeed2"))};
  CHECK(speeds == std::set<std::int64_t>{90, 130});
}

TEST_CASE("functionality holds at larger carriers with inversion formulas") {
  const RuleModule rep = repaired_precond();
  Bounds b;
  b.sizes = {{"Vehicle", 2}, {"Day", 1}, {"Road", 1}};
  CHECK(check_assertion(rules_to_formulas(rep), *rep.find_assertion("maxSpFunctional"), b).status ==
        AssertionResult::Status::Valid);
}

TEST_CASE("a node budget that runs out is reported distinctly") {
  const RuleModule rep = repaired_precond();
  SearchOptions o;
  o.node_budget = 10;
  CHECK_THROWS_AS(check_assertion(rules_to_formulas(rep), *rep.find_assertion("maxSpFunctional"), singletons(), o),
                  ResourceLimit);
  CHECK_THROWS_AS(enumerate_models(rules_to_formulas(rep), singletons(), o), ResourceLimit);
}

TEST_CASE("enumeration order does not depend on the thread count") {
  const RuleModule m = fixture::module_file("data/speedlimit.l4");
  const FormulaSet fs = rules_to_formulas(m, {InversionScope::None, {}});
  Bounds b;
  b.sizes = {{"Vehicle", 1}, {"Day", 2}, {"Road", 1}};
  b.ints = {90, 130};
  SearchOptions one;
  one.max_models = 300;
  SearchOptions four = one;
  four.threads = 4;
  const auto a = enumerate_models(fs, b, one).models;
  const auto c = enumerate_models(fs, b, four).models;
  REQUIRE(a.size() == 300);
  REQUIRE(c.size() == a.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].to_json() == c[i].to_json());

  const RuleModule rep = repaired_precond();
  const auto r1 = check_assertion(rules_to_formulas(rep, {InversionScope::None, {}}),
                                  *rep.find_assertion("maxSpFunctional"), singletons(), one);
  const auto r4 = check_assertion(rules_to_formulas(rep, {InversionScope::None, {}}),
                                  *rep.find_assertion("maxSpFunctional"), singletons(), four);
  REQUIRE(r1.model.has_value());
  REQUIRE(r4.model.has_value());
  CHECK(r1.model->to_json() == r4.model->to_json());
}

TEST_CASE("interpretation lookup") {
  const RuleModule m = fixture::module_text("decl P : Boolean\nfact <f> P\n");
  const auto r = enumerate_models(rules_to_formulas(m), Bounds{});
  REQUIRE(r.models.size() == 1);
  CHECK(std::get<bool>(r.models[0].at("P")));
  CHECK_THROWS_AS(r.models[0].at("P", {Value{true}}), std::out_of_range);
  CHECK(value_text(Value{std::int64_t{90}}) == "90");
  CHECK(value_text(Value{false}) == "false");
}
