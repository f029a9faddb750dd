#include <doctest.h>

#include "fixtures.hpp"
#include "l4/classical.hpp"
#include "suites.hpp"

using namespace l4;

TEST_CASE("repaired speed limits transfer in both directions at singleton carriers") {
  const RuleModule m = fixture::module_file("data/speedlimit_repaired.l4");
  Bounds b;
  b.sizes = {{"Vehicle", 1}, {"Day", 1}, {"Road", 1}};
  const CorrespondenceReport r = check_model_correspondence(m, b);
  CHECK(r.precond_models > 0);
  CHECK(r.deriv_models > 0);
  CHECK(r.violations.empty());
}

TEST_CASE("single unconditional rule has one forced model on each side") {
  const RuleModule m = fixture::module_text("decl P : Boolean\nfact <f> P\n");
  const CorrespondenceReport r = check_model_correspondence(m, Bounds{});
  CHECK(r.precond_models == 1);
  CHECK(r.deriv_models == 1);
  CHECK(r.ok());
}

TEST_CASE("propositional pair with a subjectTo modifier") {
  const RuleModule m = fixture::module_file("data/propositional.l4");
  const CorrespondenceReport r = check_model_correspondence(m, Bounds{});
  CHECK(r.precond_models == r.deriv_models);
  CHECK(r.ok());
}

TEST_CASE("propositional pair without facts: free B1 and B2") {
  const RuleModule m = fixture::module_text(
      "decl B1 : Boolean\ndecl B2 : Boolean\ndecl C1 : Boolean\ndecl C2 : Boolean\n"
      "rule <r1> if B1 then C1\nrule <r2> {subjectTo: r1} if B2 then C2\n");
  const CorrespondenceReport r = check_model_correspondence(m, Bounds{});
  // B1, B2 free; C1, C2 determined by the inversion formulas.
  CHECK(r.precond_models == 4);
  CHECK(r.deriv_models == 4);
  CHECK(r.ok());
}

TEST_CASE("model transfer over random annotated rule sets") {
  const suite::Outcome o = suite::model_transfer(60, 7);
  INFO((o.failures.empty() ? std::string() : o.failures.front()));
  CHECK(o.cases == 60);
  CHECK(o.checked > 60);
  CHECK(o.failures.empty());
}
