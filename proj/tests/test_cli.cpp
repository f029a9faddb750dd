#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <json.hpp>

#include "fixtures.hpp"
#include "suites.hpp"

namespace {

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

std::string first_failure(const suite::Outcome& o) { return o.failures.empty() ? "" : o.failures.front(); }

}  // namespace

TEST_CASE("every manifest case reproduces its golden output") {
  const suite::Outcome o = suite::cli_goldens();
  INFO(first_failure(o));
  CHECK(o.cases >= 25);
  CHECK(o.failures.empty());
}

TEST_CASE("a second run is byte-identical") {
  const suite::Outcome o = suite::cli_goldens();
  INFO(first_failure(o));
  CHECK(o.failures.empty());
}

TEST_CASE("output does not depend on the thread count") {
  for (const char* t : {"--threads 1", "--threads 4"}) {
    const suite::Outcome o = suite::cli_goldens(t);
    INFO(t << ": " << first_failure(o));
    CHECK(o.failures.empty());
  }
}

TEST_CASE("diagnostics name the file, position and cycle") {
  const auto cyc = fixture::l4c_stderr("transform data/speedlimit_original.l4 --variant precond");
  CHECK(cyc.exit_code == 2);
  CHECK(contains(cyc.out, "data/speedlimit_original.l4: error: "));
  CHECK(contains(cyc.out, "maxSpCarHighway -> maxSpCarWorkday -> maxSpSportsCar -> maxSpCarHighway"));

  const auto path = std::filesystem::temp_directory_path() / "l4c_test_bad.l4";
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    REQUIRE(f != nullptr);
    std::fputs("decl P : Boolean\nrule <r> if P && then P\n", f);
    std::fclose(f);
  }
  const auto syn = fixture::l4c_stderr("parse '" + path.string() + "'");
  CHECK(syn.exit_code == 2);
  CHECK(contains(syn.out, path.string() + ":2:"));
  CHECK(contains(syn.out, "expected"));
  CHECK_FALSE(contains(syn.out, "\x1b["));
  std::filesystem::remove(path);

  const auto missing = fixture::l4c_stderr("legal-models data/asp/none.cfg");
  CHECK(missing.exit_code == 2);
  CHECK(contains(missing.out, "data/asp/none.cfg"));
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(fixture::l4c("transform data/speedlimit_repaired.l4 --variant sideways").exit_code == 2);
  CHECK(fixture::l4c("--threads 0 legal-models data/asp/bob.cfg").exit_code == 2);
  CHECK(fixture::l4c("check data/speedlimit_repaired.l4 --assert maxSpFunctional --sizes Vehicle=0").exit_code == 2);
  CHECK(fixture::l4c("check data/speedlimit_repaired.l4 --assert maxSpFunctional --sizes Vehicle").exit_code == 2);
  CHECK(fixture::l4c("check data/speedlimit_repaired.l4 --assert maxSpFunctional --ints x").exit_code == 2);
  CHECK(fixture::l4c("invert data/speedlimit_repaired.l4 --predicate nothing").exit_code == 2);
  CHECK(fixture::l4c("frobnicate").exit_code == 2);
}

TEST_CASE("help exits with code 0") {
  const auto r = fixture::l4c("--help");
  CHECK(r.exit_code == 0);
  for (const char* sub : {"parse", "transform", "invert", "emit-smt", "check", "correspond", "emit-asp",
                          "legal-models", "answer-sets", "verify-lemma4"})
    CHECK(contains(r.out, sub));
  CHECK(fixture::l4c("check --help").exit_code == 0);
}

TEST_CASE("output files match standard output") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto lp = dir / "l4c_test_bob.lp";
  const auto smt = dir / "l4c_test_speed.smt2";
  CHECK(fixture::l4c("emit-asp data/asp/bob.cfg -o '" + lp.string() + "'").exit_code == 0);
  CHECK(fixture::l4c("emit-smt data/speedlimit_repaired.l4 --assert maxSpFunctional -o '" + smt.string() + "'")
            .exit_code == 0);
  CHECK(fixture::read(lp.string()) == fixture::read("tests/golden/emit-asp-bob.out"));
  CHECK(fixture::read(smt.string()) == fixture::read("tests/golden/emit-smt-repaired.out"));
  std::filesystem::remove(lp);
  std::filesystem::remove(smt);
}

TEST_CASE("JSON reports carry the schema tag and the counts") {
  const auto legal = nlohmann::json::parse(fixture::l4c("legal-models data/asp/bob.cfg --json").out);
  CHECK(legal.at("schema") == "l4c/1");
  CHECK(legal.at("command") == "legal-models");
  CHECK(legal.at("models").size() == 2);

  const auto check = nlohmann::json::parse(
      fixture::l4c("check data/speedlimit.l4 --assert maxSpFunctional --sizes Vehicle=1,Day=1,Road=1 --json").out);
  CHECK(check.at("schema") == "l4c/1");
  CHECK(check.at("status") == "countermodel");
  CHECK(check.contains("model"));

  const auto gap = nlohmann::json::parse(fixture::l4c("verify-lemma4 data/asp/converse_gap.cfg --json").out);
  CHECK(gap.at("sound") == true);
  CHECK(gap.at("uncovered_legal_models").size() == 1);
}
