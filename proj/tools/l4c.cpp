// l4c: command-line front end for the rule compiler and reasoners.
//
// Exit codes: 0 success, 1 property fails, 2 usage or input error,
// 3 resource cap reached.

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "l4/asp.hpp"
#include "l4/classical.hpp"
#include "l4/errors.hpp"
#include "l4/inversion.hpp"
#include "l4/parser.hpp"
#include "l4/printer.hpp"
#include "l4/transform.hpp"
#include "l4/typecheck.hpp"
#include "l4/wellformed.hpp"

namespace {

using nlohmann::json;
using namespace l4;

constexpr const char* kSchema = "l4c/1";

enum Exit { kOk = 0, kFails = 1, kUsage = 2, kResource = 3 };

struct Options {
  std::string file;
  std::string variant = "precond";
  bool json = false;
  bool emit_l4 = false;
  bool simplify = false;
  std::string predicate;
  std::string assertion;
  std::string out;
  std::string sizes;
  std::string ints = "90,130,320";
  std::string inversions = "concluded";
  std::uint64_t budget = 200'000'000;
  unsigned threads = 1;
  bool minimal_only = false;
};

std::string current_file;

bool color_stderr() { return std::getenv("NO_COLOR") == nullptr && isatty(fileno(stderr)); }

void report(const std::string& where, SourceLoc loc, const std::string& msg) {
  std::string head = where;
  if (loc.line > 0) head += ":" + format_loc(loc);
  const std::string tag = color_stderr() ? "\033[1;31merror:\033[0m" : "error:";
  std::cerr << head << ": " << tag << " " << msg << "\n";
}

json with_schema(json j) {
  json out = {{"schema", kSchema}};
  for (auto& [k, v] : j.items()) out[k] = v;
  return out;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw InputError("cannot write '" + out + "'");
  f << text;
}

RuleModule load_module(const std::string& path) {
  const SourceFile src = read_source(path);
  RuleModule m = parse_module(src);
  const auto diags = check_well_formed(m);
  bool failed = false;
  for (const auto& d : diags) {
    std::cerr << path << ":" << format_diagnostic(d) << "\n";
    failed = failed || d.severity == Diagnostic::Severity::Error;
  }
  if (failed) throw InputError(std::to_string(diags.size()) + " problem(s) in " + path);
  typecheck_module(m);
  return m;
}

RestrictionVariant parse_variant(const std::string& v) {
  if (v == "precond") return RestrictionVariant::ViaPrecondition;
  if (v == "deriv") return RestrictionVariant::ViaDerivability;
  throw InputError("unknown variant '" + v + "' (expected precond or deriv)");
}

InversionScope parse_scope(const std::string& s) {
  if (s == "none") return InversionScope::None;
  if (s == "concluded") return InversionScope::Transformable;
  if (s == "all") return InversionScope::AllPredicates;
  throw InputError("unknown inversion scope '" + s + "' (expected none, concluded or all)");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, sep);)
    if (!part.empty()) out.push_back(part);
  return out;
}

std::int64_t parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("bad " + what + " '" + s + "'");
  }
}

Bounds parse_bounds(const Options& o) {
  Bounds b;
  for (const auto& item : split(o.sizes, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("bad size '" + item + "' (expected SORT=N)");
    const std::int64_t n = parse_int(item.substr(eq + 1), "size");
    if (n < 1 || n > 64) throw InputError("size of '" + item.substr(0, eq) + "' must be in 1..64");
    b.sizes[item.substr(0, eq)] = static_cast<int>(n);
  }
  b.ints.clear();
  for (const auto& v : split(o.ints, ',')) b.ints.push_back(parse_int(v, "integer bound"));
  return b;
}

SearchOptions search_options(const Options& o) {
  SearchOptions s;
  s.node_budget = o.budget;
  s.threads = o.threads;
  return s;
}

json rule_json(const Rule& r) {
  json params = json::array();
  for (const auto& p : r.params) params.push_back({{"name", p.name}, {"type", print_type(p.type)}});
  json j = {{"name", r.name}, {"params", params}};
  if (r.annotation) j["annotation"] = print_annotation(*r.annotation);
  if (!r.is_derived()) {
    j["precondition"] = print_expr(r.precond);
    j["postcondition"] = print_expr(r.postcond);
  }
  if (r.system) j["system"] = true;
  j["text"] = print_rule(r);
  return j;
}

json module_json(const RuleModule& m) {
  json classes = json::array();
  for (const auto& c : m.classes) {
    json attrs = json::array();
    for (const auto& a : c.attributes) attrs.push_back({{"name", a.name}, {"type", print_type(a.type)}});
    json cj = {{"name", c.name}, {"parent", c.parent}, {"attributes", attrs}};
    if (!c.members.empty()) cj["members"] = c.members;
    classes.push_back(cj);
  }
  auto decls = [](const std::vector<FunDecl>& ds) {
    json out = json::array();
    for (const auto& d : ds) out.push_back({{"name", d.name}, {"type", print_type(d.type)}});
    return out;
  };
  json rules = json::array();
  for (const auto& r : m.rules) rules.push_back(rule_json(r));
  json asserts = json::array();
  for (const auto& a : m.assertions)
    asserts.push_back({{"name", a.name},
                       {"mode", a.mode == AssertMode::Valid ? "valid" : "satisfiable"},
                       {"add", a.add_rules},
                       {"delete", a.delete_rules},
                       {"formula", print_expr(a.formula)}});
  return {{"classes", classes}, {"decls", decls(m.decls)}, {"globals", decls(m.globals)},
          {"rules", rules},     {"assertions", asserts}};
}

int cmd_parse(const Options& o) {
  const RuleModule m = load_module(o.file);
  if (o.json)
    std::cout << with_schema({{"command", "parse"}, {"module", module_json(m)}}).dump(2) << "\n";
  else
    std::cout << print_module(m);
  return kOk;
}

PipelineResult transformed(const RuleModule& m, const Options& o) {
  return run_pipeline(m, PipelineOptions{parse_variant(o.variant), o.simplify});
}

std::vector<Rule> user_rules(const RuleModule& m) {
  std::vector<Rule> out;
  for (const auto& r : m.rules)
    if (!r.system) out.push_back(r);
  return out;
}

int cmd_transform(const Options& o) {
  const RuleModule m = load_module(o.file);
  const PipelineResult r = transformed(m, o);
  if (o.json) {
    json rules = json::array();
    for (const auto& rule : user_rules(r.module)) rules.push_back(rule_json(rule));
    json trace = json::array();
    for (const auto& st : r.trace) {
      json rs = json::array();
      for (const auto& rule : st.rules) rs.push_back(print_rule(rule));
      trace.push_back({{"stage", st.name}, {"rules", rs}});
    }
    std::cout << with_schema({{"command", "transform"},
                              {"variant", o.variant},
                              {"simplified", o.simplify},
                              {"order", r.order.sequence},
                              {"rules", rules},
                              {"trace", trace}})
                     .dump(2)
              << "\n";
    return kOk;
  }
  if (o.emit_l4) {
    std::cout << print_module(r.module);
    return kOk;
  }
  std::cout << "# rule order:";
  for (const auto& n : r.order.sequence) std::cout << " " << n;
  std::cout << "\n";
  for (const auto& rule : user_rules(r.module)) std::cout << "\n" << print_rule(rule);
  return kOk;
}

int cmd_invert(const Options& o) {
  const RuleModule m = load_module(o.file);
  const PipelineResult r = transformed(m, o);
  const Signature sig(elaborate(r.module));
  std::string p = o.predicate;
  if (!sig.is_symbol(p) && sig.is_symbol(lifted_name(p))) p = lifted_name(p);
  if (!sig.is_symbol(p)) throw NameError("unknown predicate '" + o.predicate + "'");
  const auto rules = user_rules(r.module);
  const Expr inv = inversion_formula(sig, rules, p);
  const MonotonicityReport mono = check_syntactic_monotonicity(rules, p);
  if (o.json) {
    json occ = json::array();
    for (const auto& oc : mono.offending)
      occ.push_back({{"rule", oc.rule},
                     {"line", oc.loc.line},
                     {"col", oc.loc.col},
                     {"negations", oc.negations < 0 ? json("mixed") : json(oc.negations)}});
    std::cout << with_schema({{"command", "invert"},
                              {"predicate", p},
                              {"variant", o.variant},
                              {"inversion", print_expr(inv)},
                              {"monotonic", mono.monotonic},
                              {"offending", occ}})
                     .dump(2)
              << "\n";
    return kOk;
  }
  std::cout << print_expr(inv) << "\n";
  std::cout << "# syntactically monotonic: " << (mono.monotonic ? "yes" : "no") << "\n";
  for (const auto& oc : mono.offending)
    std::cout << "#   " << oc.rule << " at " << format_loc(oc.loc) << ": "
              << (oc.negations < 0 ? std::string("mixed polarity")
                                   : std::to_string(oc.negations) + " negations")
              << "\n";
  return kOk;
}

struct Prepared {
  RuleModule module;
  Assertion assertion;
  FormulaSet formulas;
};

Prepared prepare(const Options& o) {
  const RuleModule m = load_module(o.file);
  const PipelineResult r = transformed(m, o);
  const Assertion* a = r.module.find_assertion(o.assertion);
  if (!a) throw NameError("no assertion named '" + o.assertion + "'");
  const FormulaSet fs =
      rules_to_formulas(r.module, options_for(r.module, *a, parse_scope(o.inversions)));
  return Prepared{r.module, *a, fs};
}

int cmd_emit_smt(const Options& o) {
  const Prepared p = prepare(o);
  emit(emit_smtlib(p.formulas, p.assertion), o.out);
  return kOk;
}

std::string human_model(const Interpretation& m) {
  std::string out;
  for (const auto& [s, elems] : m.carriers) {
    out += "  sort " + s + " = {";
    for (std::size_t i = 0; i < elems.size(); ++i) out += (i ? ", " : "") + elems[i];
    out += "}\n";
  }
  for (const auto& [sym, rows] : m.tables) {
    for (const auto& row : rows) {
      out += "  " + sym;
      if (!row.args.empty()) {
        out += "(";
        for (std::size_t i = 0; i < row.args.size(); ++i)
          out += (i ? ", " : "") + value_text(row.args[i]);
        out += ")";
      }
      out += " = " + value_text(row.value) + "\n";
    }
  }
  return out;
}

int cmd_check(const Options& o) {
  const Prepared p = prepare(o);
  const Bounds b = parse_bounds(o);
  const AssertionResult r = check_assertion(p.formulas, p.assertion, b, search_options(o));
  const bool ok = r.status == AssertionResult::Status::Valid ||
                  r.status == AssertionResult::Status::Satisfiable;
  if (o.json) {
    json j = {{"command", "check"},
              {"assertion", p.assertion.name},
              {"variant", o.variant},
              {"inversions", o.inversions},
              {"status", status_text(r.status)},
              {"at_bounds", true},
              {"sizes", b.sizes},
              {"ints", b.ints},
              {"nodes", r.nodes}};
    if (r.model) j["model"] = json::parse(r.model->to_json());
    std::cout << with_schema(j).dump(2) << "\n";
  } else {
    std::cout << p.assertion.name << ": " << status_text(r.status) << " at bounds\n";
    if (r.model) std::cout << human_model(*r.model);
  }
  return ok ? kOk : kFails;
}

int cmd_correspond(const Options& o) {
  const RuleModule m = load_module(o.file);
  const Bounds b = parse_bounds(o);
  const CorrespondenceReport r = check_model_correspondence(m, b, search_options(o));
  if (o.json) {
    json v = json::array();
    for (const auto& x : r.violations)
      v.push_back({{"direction", x.direction},
                   {"model", x.model_index},
                   {"formula", x.formula},
                   {"source", json::parse(x.source.to_json())},
                   {"constructed", json::parse(x.constructed.to_json())}});
    std::cout << with_schema({{"command", "correspond"},
                              {"precond_models", r.precond_models},
                              {"deriv_models", r.deriv_models},
                              {"projection", "exists rule name"},
                              {"violations", v},
                              {"nodes", r.nodes}})
                     .dump(2)
              << "\n";
  } else {
    std::cout << "precondition-variant models: " << r.precond_models << "\n"
              << "derivability-variant models: " << r.deriv_models << "\n"
              << "violations: " << r.violations.size() << "\n";
    for (const auto& x : r.violations)
      std::cout << "  " << x.direction << " model " << x.model_index << " falsifies " << x.formula
                << "\n";
  }
  return r.ok() ? kOk : kFails;
}

asp::Config load_config(const std::string& path) {
  return asp::ground(asp::parse_config(read_source(path).text));
}

json legal_model_json(const asp::LegalModel& m) {
  json il = json::array(), lv = json::array();
  for (const auto& a : m.is_legal) il.push_back(a.str());
  for (const auto& [id, c] : m.legally_valid) lv.push_back({{"rule", id}, {"conclusion", c.str()}});
  return {{"valid_rules", m.valid_rules()}, {"is_legal", il}, {"legally_valid", lv}};
}

int cmd_emit_asp(const Options& o) {
  emit(asp::emit_asp(load_config(o.file)).text(), o.out);
  return kOk;
}

int cmd_legal_models(const Options& o) {
  const auto models = asp::legal_models(load_config(o.file), o.minimal_only);
  if (o.json) {
    json ms = json::array();
    for (const auto& m : models) ms.push_back(legal_model_json(m));
    std::cout << with_schema({{"command", "legal-models"},
                              {"minimal_only", o.minimal_only},
                              {"count", models.size()},
                              {"models", ms}})
                     .dump(2)
              << "\n";
    return kOk;
  }
  std::cout << models.size() << " legal model(s)\n";
  for (const auto& m : models) std::cout << m.str() << "\n";
  return kOk;
}

int cmd_answer_sets(const Options& o) {
  const auto sets = asp::answer_sets(asp::emit_asp(load_config(o.file)));
  if (o.json) {
    json ss = json::array();
    for (const auto& s : sets) {
      json atoms = json::array();
      for (const auto& a : s) atoms.push_back(a.str());
      ss.push_back({{"atoms", atoms}, {"projection", legal_model_json(asp::project(s))}});
    }
    std::cout << with_schema({{"command", "answer-sets"}, {"count", sets.size()}, {"answer_sets", ss}})
                     .dump(2)
              << "\n";
    return kOk;
  }
  std::cout << sets.size() << " answer set(s)\n";
  for (const auto& s : sets) std::cout << asp::set_str(s) << "\n";
  return kOk;
}

int cmd_verify_soundness(const Options& o) {
  const auto rep = asp::check_answer_set_soundness(load_config(o.file));
  if (o.json) {
    json es = json::array();
    for (const auto& e : rep.entries) {
      json j = {{"projection", legal_model_json(e.projection)}, {"legal", !e.violation}};
      if (e.violation) j["violation"] = *e.violation;
      es.push_back(j);
    }
    json gap = json::array();
    for (const auto& g : rep.gap) gap.push_back(legal_model_json(g));
    std::cout << with_schema({{"command", "verify-lemma4"},
                              {"sound", rep.sound()},
                              {"answer_sets", es},
                              {"uncovered_legal_models", gap}})
                     .dump(2)
              << "\n";
  } else {
    std::cout << rep.entries.size() << " answer set(s)\n";
    for (const auto& e : rep.entries)
      std::cout << (e.violation ? "FAIL " : "ok   ") << e.projection.str()
                << (e.violation ? "  (" + *e.violation + ")" : "") << "\n";
    std::cout << rep.gap.size() << " legal model(s) not covered by an answer set\n";
    for (const auto& g : rep.gap) std::cout << "gap  " << g.str() << "\n";
  }
  return rep.sound() ? kOk : kFails;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"l4c: compile and check L4 rule modules and rule configurations"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--threads", o.threads, "Worker threads for model search")
      ->check(CLI::Range(1u, 256u));

  auto file = [&](CLI::App* sc, const char* what) {
    sc->add_option("file", o.file, what)->required();
  };
  auto l4file = [&](CLI::App* sc) {
    file(sc, "L4 module");
    sc->add_option("--variant", o.variant, "precond or deriv")->capture_default_str();
  };
  auto bounds = [&](CLI::App* sc) {
    sc->add_option("--sizes", o.sizes, "Carrier sizes, e.g. Vehicle=1,Day=1");
    sc->add_option("--ints", o.ints, "Integer bound set")->capture_default_str();
    sc->add_option("--budget", o.budget, "Search node budget")->capture_default_str();
  };

  auto* parse = app.add_subcommand("parse", "Parse, check and pretty-print a module");
  file(parse, "L4 module");
  parse->add_flag("--json", o.json);

  auto* transform = app.add_subcommand("transform", "Eliminate rule modifiers");
  l4file(transform);
  transform->add_flag("--emit-l4", o.emit_l4, "Print the whole transformed module");
  transform->add_flag("--json", o.json);
  transform->add_flag("--simplify", o.simplify);

  auto* invert = app.add_subcommand("invert", "Inversion formula of a predicate");
  l4file(invert);
  invert->add_option("--predicate", o.predicate)->required();
  invert->add_flag("--json", o.json);

  auto* smt = app.add_subcommand("emit-smt", "Write an SMT-LIB script for an assertion");
  l4file(smt);
  smt->add_option("--assert", o.assertion)->required();
  smt->add_option("--inversions", o.inversions, "none, concluded or all")->capture_default_str();
  smt->add_option("-o", o.out, "Output file");

  auto* check = app.add_subcommand("check", "Check an assertion by finite model search");
  l4file(check);
  check->add_option("--assert", o.assertion)->required();
  check->add_option("--inversions", o.inversions, "none, concluded or all")->capture_default_str();
  bounds(check);
  check->add_flag("--json", o.json);

  auto* correspond = app.add_subcommand("correspond", "Check model transfer between the variants");
  file(correspond, "L4 module");
  bounds(correspond);
  correspond->add_flag("--json", o.json);

  auto* easp = app.add_subcommand("emit-asp", "Write the answer-set encoding of a configuration");
  file(easp, "Rule configuration");
  easp->add_option("-o", o.out, "Output file");

  auto* legal = app.add_subcommand("legal-models", "Enumerate legal models");
  file(legal, "Rule configuration");
  legal->add_flag("--minimal-only", o.minimal_only);
  legal->add_flag("--json", o.json);

  auto* sets = app.add_subcommand("answer-sets", "Stable models of the encoding");
  file(sets, "Rule configuration");
  sets->add_flag("--json", o.json);

  auto* soundness = app.add_subcommand("verify-lemma4", "Check answer sets against the legal-model axioms");
  file(soundness, "Rule configuration");
  soundness->add_flag("--json", o.json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*parse) return cmd_parse(o);
    if (*transform) return cmd_transform(o);
    if (*invert) return cmd_invert(o);
    if (*smt) return cmd_emit_smt(o);
    if (*check) return cmd_check(o);
    if (*correspond) return cmd_correspond(o);
    if (*easp) return cmd_emit_asp(o);
    if (*legal) return cmd_legal_models(o);
    if (*sets) return cmd_answer_sets(o);
    if (*soundness) return cmd_verify_soundness(o);
  } catch (const ResourceLimit& e) {
    report(o.file, e.loc(), e.what());
    return kResource;
  } catch (const Error& e) {
    report(o.file, e.loc(), e.what());
    return kUsage;
  }
  return kUsage;
}
