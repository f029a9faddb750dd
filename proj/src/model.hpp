// Finite interpretations and a compiled three-valued formula evaluator
// shared by the enumerator and the correspondence checker.
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "l4/classical.hpp"

namespace l4::detail {

enum class DomKind { Bool, Int, Elem };

struct Domain {
  DomKind kind = DomKind::Bool;
  std::string sort;
  std::size_t size = 2;
};

// Carriers are created on first use so that only sorts a formula touches
// need a size.
class Universe {
 public:
  Universe(const Signature& sig, const Bounds& bounds);

  Domain domain(const LType& t);
  std::int64_t value_at(const Domain& d, std::size_t i) const;
  // Throws InputError for integers outside the bounds.
  std::size_t index_of(const Domain& d, std::int64_t v) const;
  Value to_value(const Domain& d, std::int64_t v) const;
  const std::map<std::string, std::vector<std::string>>& carriers() const { return carriers_; }
  const Signature& sig() const { return *sig_; }

 private:
  const Signature* sig_;
  std::map<std::string, int> sizes_;
  std::vector<std::int64_t> ints_;
  std::map<std::string, std::vector<std::string>> carriers_;
};

struct SymbolInfo {
  std::string name;
  std::vector<Domain> args;
  Domain result;
  std::size_t size = 1;
  // Enum constants have a fixed value and are never searched.
  bool fixed = false;
  std::int64_t fixed_value = 0;
};

class Vocabulary {
 public:
  explicit Vocabulary(Universe u) : universe_(std::move(u)) {}

  // Index of the symbol, registering it on first use.
  int add(const std::string& name);
  int find(const std::string& name) const;
  const SymbolInfo& at(int i) const { return symbols_.at(i); }
  std::size_t size() const { return symbols_.size(); }
  Universe& universe() { return universe_; }
  const Universe& universe() const { return universe_; }

 private:
  Universe universe_;
  std::vector<SymbolInfo> symbols_;
  std::map<std::string, int> index_;
};

enum class Op { Const, Slot, Sym, Not, And, Or, Implies, Eq, Lt, Le, Gt, Ge, Ite, Forall, Exists };

struct Node {
  Node() = default;
  explicit Node(Op o, std::int64_t v = 0) : op(o), value(v) {}

  Op op = Op::Const;
  std::int64_t value = 0;
  int slot = -1;
  int sym = -1;
  Domain dom;
  // Characteristic predicate restricting a quantifier to a subclass.
  int guard = -1;
  std::vector<int> kids;
};

struct Program {
  std::vector<Node> nodes;
  std::vector<int> roots;
  std::vector<std::string> origins;
  std::vector<std::set<int>> symbols_of;
  int slots = 0;
};

// Compiles closed formulas, or open ones over named parameter slots, into p.
// Throws UnsupportedError for constructs outside first-order finite
// evaluation.
int compile(Program& p, Vocabulary& voc, const Expr& e,
            const std::vector<std::string>& params = {});

// Symbols a formula depends on, excluding enum constants.
std::set<std::string> symbols_in(const Signature& sig, const Expr& e);

struct State {
  std::vector<std::vector<std::int64_t>> vals;
  std::vector<std::vector<char>> known;

  static State empty(const Vocabulary& voc);
};

struct TV {
  bool known = false;
  std::int64_t v = 0;
};

TV eval(const Program& p, const Vocabulary& voc, const State& st, int node,
        std::vector<std::int64_t>& env);

// Row-major offset of an argument tuple given as value indexes.
std::size_t offset_of(const SymbolInfo& s, const std::vector<std::size_t>& arg_index);
// Decodes a row-major offset into value indexes.
std::vector<std::size_t> decode(const SymbolInfo& s, std::size_t offset);

Interpretation to_interpretation(const Vocabulary& voc, const State& st);

// Formulas of fs kept for enumeration: all foreground formulas plus the
// background axioms reachable from their symbols.
std::vector<const Formula*> active_formulas(const FormulaSet& fs,
                                            const std::vector<std::string>& extra_symbols,
                                            std::set<std::string>* symbols = nullptr);

struct RawEnumeration {
  Vocabulary voc;
  Program prog;
  std::vector<State> models;
  std::uint64_t nodes = 0;
};

RawEnumeration enumerate_raw(const FormulaSet& fs, const Bounds& bounds, const SearchOptions& opts);

}  // namespace l4::detail
