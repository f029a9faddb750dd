// Configurations (R, F, M, I) of defeasible rules, their legal models,
// the answer-set encoding and a small stable-model solver.
//
// Modifier argument order follows the axioms literally:
//   despite(a, b)            a is subordinate, b dominates
//   subject_to(a, b)         a dominates, b is subordinate
//   strong_subject_to(a, b)  a dominates, b is subordinate
#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace l4::asp {

// Constant, variable (upper-case initial, no arguments) or compound term.
// Atoms are terms.
struct Term {
  std::string name;
  std::vector<Term> args;

  bool is_var() const;
  bool ground() const;
  std::string str() const;

  friend bool operator==(const Term&, const Term&) = default;
  // Integers compare numerically, everything else by name, then arguments.
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);
};

Term constant(const std::string& name);
Term compound(const std::string& name, std::vector<Term> args);

struct Literal {
  Term atom;
  bool naf = false;
  friend bool operator==(const Literal&, const Literal&) = default;
};

struct DefRule {
  int id = 0;
  Term head;
  std::vector<Literal> body;
};

enum class ModKind { Despite, SubjectTo, StrongSubjectTo };

const char* mod_name(ModKind k);

struct Modifier {
  ModKind kind = ModKind::Despite;
  int a = 0;
  int b = 0;
  friend bool operator==(const Modifier&, const Modifier&) = default;
};

struct Config {
  std::vector<DefRule> rules;
  std::vector<Term> facts;
  std::vector<Modifier> modifiers;
  std::vector<std::vector<Term>> inconsistent;
  // Range of schematic variables; empty means every constant of the config.
  std::vector<Term> constants;

  const DefRule* rule(int id) const;
};

// Throws InputError: duplicate rule ids, unresolved modifier ids, non-ground
// facts or inconsistent sets, an inconsistent set with fewer than 2 atoms.
void validate(const Config& c);

// Text format, one statement per '.':
//   rule 1: head <- lit, not lit.    fact: atom.
//   modifier: despite(1,2).          inconsistent: {a, b}.
//   constants: a, b.
// Comments start with '#' or '%'. Throws InputError.
Config parse_config(const std::string& text);

bool is_ground(const Config& c);

// Instantiates schematic rules over `constants`; instance k (from 1) of rule
// i gets id i*1000+k. Modifiers on a schematic rule apply to all its
// instances. Ground configs are returned unchanged.
Config ground(const Config& c, const std::vector<Term>& constants);
// Grounds over c.constants, or every constant in c when none are listed.
Config ground(const Config& c);

struct LegalModel {
  std::set<Term> is_legal;
  std::set<std::pair<int, Term>> legally_valid;

  std::vector<int> valid_rules() const;
  // {is_legal(a), legally_valid(1,a)}
  std::string str() const;
  friend bool operator==(const LegalModel&, const LegalModel&) = default;
  friend bool operator<(const LegalModel& a, const LegalModel& b);
};

// The first axiom (A1..A7) that S violates, with an explanation.
std::optional<std::string> legal_model_violation(const Config& c, const LegalModel& s);
inline bool is_legal_model(const Config& c, const LegalModel& s) {
  return !legal_model_violation(c, s);
}

// Every legal model, ordered by the sorted list of valid rule ids. Throws
// ResourceLimit above `max_rules` rules.
std::vector<LegalModel> legal_models(const Config& c, bool minimal_only = false,
                                     std::size_t max_rules = 20);

struct AspRule {
  Term head;
  std::vector<Literal> body;
  std::string str() const;
};

struct AspProgram {
  // Blank-line separated groups in the emitted text.
  std::vector<std::vector<AspRule>> sections;

  std::vector<AspRule> rules() const;
  std::string text() const;
};

AspProgram emit_asp(const Config& c);

// Reads `h.` and `h :- l1, not l2.` clauses; '%' comments.
AspProgram parse_program(const std::string& text);

struct GroundRule {
  Term head;
  std::vector<Term> pos;
  std::vector<Term> neg;
};

// Instantiates variables against atoms that can possibly be derived. Throws
// InputError for unsafe variables and ResourceLimit above `max_rules`.
std::vector<GroundRule> ground_program(const AspProgram& p, std::size_t max_rules = 1'000'000);

// Stable models, found by guessing the atoms that occur under `not` and
// keeping the guesses reproduced by the least model of the reduct. Throws
// ResourceLimit with more than `max_guess_bits` such atoms.
std::vector<std::set<Term>> answer_sets(const AspProgram& p, std::size_t max_guess_bits = 20);

// is_legal and legally_valid atoms of an answer set.
LegalModel project(const std::set<Term>& answer_set);

struct SoundnessReport {
  struct Entry {
    std::set<Term> answer_set;
    LegalModel projection;
    std::optional<std::string> violation;
  };
  std::vector<Entry> entries;
  // Legal models that no answer set projects to.
  std::vector<LegalModel> gap;

  bool sound() const;
};

SoundnessReport check_answer_set_soundness(const Config& c);

std::string set_str(const std::set<Term>& atoms);

}  // namespace l4::asp
