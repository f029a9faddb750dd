#include "model.hpp"

#include <algorithm>

#include "l4/errors.hpp"
#include "l4/expr_util.hpp"

namespace l4::detail {

Universe::Universe(const Signature& sig, const Bounds& bounds)
    : sig_(&sig), sizes_(bounds.sizes), ints_(bounds.ints) {
  for (const auto& [s, n] : sizes_) {
    if (!sig.has_class(s) || !sig.is_sort(s))
      throw InputError("size given for '" + s + "', which is not a sort");
    if (n < 1) throw InputError("carrier of sort '" + s + "' must have at least one element");
  }
  std::sort(ints_.begin(), ints_.end());
  ints_.erase(std::unique(ints_.begin(), ints_.end()), ints_.end());
}

Domain Universe::domain(const LType& t) {
  switch (t.kind()) {
    case LType::Kind::Boolean: return Domain{DomKind::Bool, "", 2};
    case LType::Kind::Integer: return Domain{DomKind::Int, "", ints_.size()};
    case LType::Kind::Class: {
      const std::string& s = sig_->sort_of(t.name());
      auto it = carriers_.find(s);
      if (it == carriers_.end()) {
        std::vector<std::string> labels;
        if (sig_->is_enum(s)) {
          labels = sig_->members(s);
        } else {
          auto sz = sizes_.find(s);
          if (sz == sizes_.end()) throw InputError("no carrier size given for sort '" + s + "'");
          for (int i = 0; i < sz->second; ++i) labels.push_back(s + "#" + std::to_string(i));
        }
        it = carriers_.emplace(s, std::move(labels)).first;
      }
      return Domain{DomKind::Elem, s, it->second.size()};
    }
    default:
      throw UnsupportedError("type " + t.str() + " has no finite carrier");
  }
}

std::int64_t Universe::value_at(const Domain& d, std::size_t i) const {
  return d.kind == DomKind::Int ? ints_.at(i) : static_cast<std::int64_t>(i);
}

std::size_t Universe::index_of(const Domain& d, std::int64_t v) const {
  if (d.kind != DomKind::Int) return static_cast<std::size_t>(v);
  auto it = std::lower_bound(ints_.begin(), ints_.end(), v);
  if (it == ints_.end() || *it != v)
    throw InputError("integer " + std::to_string(v) + " lies outside the integer bounds");
  return static_cast<std::size_t>(it - ints_.begin());
}

Value Universe::to_value(const Domain& d, std::int64_t v) const {
  switch (d.kind) {
    case DomKind::Bool: return Value{v != 0};
    case DomKind::Int: return Value{v};
    case DomKind::Elem: return Value{carriers_.at(d.sort).at(static_cast<std::size_t>(v))};
  }
  return Value{v};
}

int Vocabulary::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

int Vocabulary::add(const std::string& name) {
  if (int i = find(name); i >= 0) return i;
  const Signature& sig = universe_.sig();
  const LType* t = sig.symbol(name);
  if (!t) throw NameError("unknown symbol '" + name + "'");
  SymbolInfo s;
  s.name = name;
  for (const auto& a : t->arg_types()) {
    s.args.push_back(universe_.domain(a));
    if (s.args.back().size != 0 && s.size > (std::size_t{1} << 26) / s.args.back().size)
      throw ResourceLimit("table of '" + name + "' is too large to enumerate");
    s.size *= s.args.back().size;
  }
  s.result = universe_.domain(t->result_type());
  if (auto e = sig.enum_of(name)) {
    const auto& ms = sig.members(*e);
    s.fixed = true;
    s.fixed_value = std::find(ms.begin(), ms.end(), name) - ms.begin();
  }
  const int i = static_cast<int>(symbols_.size());
  symbols_.push_back(std::move(s));
  index_.emplace(name, i);
  return i;
}

namespace {

class Compiler {
 public:
  Compiler(Program& p, Vocabulary& voc) : p_(p), voc_(voc) {}

  int run(const Expr& e, const std::vector<std::string>& params) {
    for (const auto& x : params) push(x);
    const int root = node(beta_reduce(e));
    env_.clear();
    return root;
  }

 private:
  int emit(Node n) {
    p_.nodes.push_back(std::move(n));
    return static_cast<int>(p_.nodes.size()) - 1;
  }

  int push(const std::string& x) {
    const int slot = static_cast<int>(env_.size());
    env_.emplace_back(x, slot);
    p_.slots = std::max(p_.slots, slot + 1);
    return slot;
  }

  int lookup(const std::string& x) const {
    for (auto it = env_.rbegin(); it != env_.rend(); ++it)
      if (it->first == x) return it->second;
    return -1;
  }

  int symbol(const std::string& name, const std::vector<Expr>& args) {
    const Signature& sig = voc_.universe().sig();
    if (auto e = sig.enum_of(name)) {
      if (!args.empty()) throw UnsupportedError("constant '" + name + "' applied to arguments");
      const auto& ms = sig.members(*e);
      return emit(Node{Op::Const, std::find(ms.begin(), ms.end(), name) - ms.begin()});
    }
    const int s = voc_.add(name);
    if (voc_.at(s).args.size() != args.size())
      throw UnsupportedError("symbol '" + name + "' is not fully applied");
    Node n{Op::Sym};
    n.sym = s;
    for (const auto& a : args) n.kids.push_back(node(a));
    return emit(std::move(n));
  }

  int unary(Op op, const Expr& e) {
    Node n{op};
    for (const auto& k : e.kids()) n.kids.push_back(node(k));
    return emit(std::move(n));
  }

  int node(const Expr& e) {
    switch (e.kind()) {
      case ExprKind::Var: {
        if (int slot = lookup(e.name()); slot >= 0) {
          Node n{Op::Slot};
          n.slot = slot;
          return emit(std::move(n));
        }
        return symbol(e.name(), {});
      }
      case ExprKind::BoolLit: return emit(Node{Op::Const, e.bool_value() ? 1 : 0});
      case ExprKind::IntLit: return emit(Node{Op::Const, e.int_value()});
      case ExprKind::Not: return unary(Op::Not, e);
      case ExprKind::And: return unary(Op::And, e);
      case ExprKind::Or: return unary(Op::Or, e);
      case ExprKind::Implies: return unary(Op::Implies, e);
      case ExprKind::Eq: return unary(Op::Eq, e);
      case ExprKind::IfThenElse: return unary(Op::Ite, e);
      case ExprKind::Cmp: {
        static const Op ops[] = {Op::Lt, Op::Le, Op::Gt, Op::Ge};
        return unary(ops[static_cast<int>(e.cmp_op())], e);
      }
      case ExprKind::App: {
        const Spine s = flatten_app(e);
        if (!s.head.is(ExprKind::Var) || lookup(s.head.name()) >= 0)
          throw UnsupportedError("application of a non-symbol", e.loc());
        return symbol(s.head.name(), s.args);
      }
      case ExprKind::FieldAccess: return symbol(e.name(), {e.kid(0)});
      case ExprKind::Forall:
      case ExprKind::Exists: {
        Node n{e.is(ExprKind::Forall) ? Op::Forall : Op::Exists};
        const LType& t = e.binder_type();
        n.dom = voc_.universe().domain(t);
        const Signature& sig = voc_.universe().sig();
        if (t.is_class() && !sig.is_sort(t.name()) && !sig.is_enum(t.name()))
          n.guard = voc_.add(char_pred_name(t.name()));
        n.slot = push(e.name());
        n.kids.push_back(node(e.kid(0)));
        env_.pop_back();
        return emit(std::move(n));
      }
      default:
        throw UnsupportedError("expression outside finite first-order evaluation", e.loc());
    }
  }

  Program& p_;
  Vocabulary& voc_;
  std::vector<std::pair<std::string, int>> env_;
};

void collect(const Signature& sig, const Expr& e, std::set<std::string>& bound,
             std::set<std::string>& out) {
  switch (e.kind()) {
    case ExprKind::Var:
      if (!bound.count(e.name()) && sig.is_symbol(e.name()) && !sig.enum_of(e.name()))
        out.insert(e.name());
      return;
    case ExprKind::FieldAccess: out.insert(e.name()); break;
    case ExprKind::Forall:
    case ExprKind::Exists:
    case ExprKind::Lambda: {
      const LType& t = e.binder_type();
      if (!e.is(ExprKind::Lambda) && t.is_class() && sig.has_class(t.name()) &&
          !sig.is_sort(t.name()) && !sig.is_enum(t.name()))
        out.insert(char_pred_name(t.name()));
      const bool fresh = bound.insert(e.name()).second;
      collect(sig, e.kid(0), bound, out);
      if (fresh) bound.erase(e.name());
      return;
    }
    default: break;
  }
  for (const auto& k : e.kids()) collect(sig, k, bound, out);
}

TV kleene_not(TV a) { return a.known ? TV{true, a.v ? 0 : 1} : a; }

}  // namespace

int compile(Program& p, Vocabulary& voc, const Expr& e, const std::vector<std::string>& params) {
  return Compiler(p, voc).run(e, params);
}

std::set<std::string> symbols_in(const Signature& sig, const Expr& e) {
  std::set<std::string> bound, out;
  collect(sig, beta_reduce(e), bound, out);
  return out;
}

State State::empty(const Vocabulary& voc) {
  State st;
  for (std::size_t i = 0; i < voc.size(); ++i) {
    const SymbolInfo& s = voc.at(static_cast<int>(i));
    st.vals.emplace_back(s.size, s.fixed_value);
    st.known.emplace_back(s.size, s.fixed ? 1 : 0);
  }
  return st;
}

TV eval(const Program& p, const Vocabulary& voc, const State& st, int id,
        std::vector<std::int64_t>& env) {
  const Node& n = p.nodes[static_cast<std::size_t>(id)];
  switch (n.op) {
    case Op::Const: return TV{true, n.value};
    case Op::Slot: return TV{true, env[static_cast<std::size_t>(n.slot)]};
    case Op::Sym: {
      const SymbolInfo& s = voc.at(n.sym);
      std::size_t off = 0;
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        const TV a = eval(p, voc, st, n.kids[i], env);
        if (!a.known) return TV{};
        off = off * s.args[i].size + voc.universe().index_of(s.args[i], a.v);
      }
      const auto sym = static_cast<std::size_t>(n.sym);
      if (!st.known[sym][off]) return TV{};
      return TV{true, st.vals[sym][off]};
    }
    case Op::Not: return kleene_not(eval(p, voc, st, n.kids[0], env));
    case Op::And:
    case Op::Or:
    case Op::Implies: {
      // a && b, a || b, not a || b: a side with value `stop` decides.
      const std::int64_t stop = n.op == Op::And ? 0 : 1;
      bool unknown = false;
      for (std::size_t i = 0; i < 2; ++i) {
        TV a = eval(p, voc, st, n.kids[i], env);
        if (n.op == Op::Implies && i == 0) a = kleene_not(a);
        if (!a.known) unknown = true;
        else if (a.v == stop) return TV{true, stop};
      }
      return unknown ? TV{} : TV{true, 1 - stop};
    }
    case Op::Eq:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge: {
      const TV a = eval(p, voc, st, n.kids[0], env);
      if (!a.known) return TV{};
      const TV b = eval(p, voc, st, n.kids[1], env);
      if (!b.known) return TV{};
      bool r = false;
      switch (n.op) {
        case Op::Eq: r = a.v == b.v; break;
        case Op::Lt: r = a.v < b.v; break;
        case Op::Le: r = a.v <= b.v; break;
        case Op::Gt: r = a.v > b.v; break;
        default: r = a.v >= b.v; break;
      }
      return TV{true, r ? 1 : 0};
    }
    case Op::Ite: {
      const TV c = eval(p, voc, st, n.kids[0], env);
      if (c.known) return eval(p, voc, st, n.kids[c.v ? 1 : 2], env);
      const TV a = eval(p, voc, st, n.kids[1], env);
      const TV b = eval(p, voc, st, n.kids[2], env);
      return a.known && b.known && a.v == b.v ? a : TV{};
    }
    case Op::Forall:
    case Op::Exists: {
      const std::int64_t stop = n.op == Op::Forall ? 0 : 1;
      bool unknown = false;
      const auto slot = static_cast<std::size_t>(n.slot);
      for (std::size_t i = 0; i < n.dom.size; ++i) {
        env[slot] = voc.universe().value_at(n.dom, i);
        TV g{true, 1};
        if (n.guard >= 0) {
          const auto gs = static_cast<std::size_t>(n.guard);
          g = st.known[gs][i] ? TV{true, st.vals[gs][i]} : TV{};
          if (g.known && !g.v) continue;
        }
        const TV b = eval(p, voc, st, n.kids[0], env);
        if (b.known && b.v == stop) {
          if (g.known) return TV{true, stop};
          unknown = true;
        } else if (!b.known) {
          unknown = true;
        }
      }
      return unknown ? TV{} : TV{true, 1 - stop};
    }
  }
  return TV{};
}

std::size_t offset_of(const SymbolInfo& s, const std::vector<std::size_t>& arg_index) {
  std::size_t off = 0;
  for (std::size_t i = 0; i < s.args.size(); ++i) off = off * s.args[i].size + arg_index[i];
  return off;
}

std::vector<std::size_t> decode(const SymbolInfo& s, std::size_t offset) {
  std::vector<std::size_t> idx(s.args.size());
  for (std::size_t i = s.args.size(); i-- > 0;) {
    idx[i] = offset % s.args[i].size;
    offset /= s.args[i].size;
  }
  return idx;
}

Interpretation to_interpretation(const Vocabulary& voc, const State& st) {
  Interpretation out;
  const Universe& u = voc.universe();
  out.carriers = u.carriers();
  for (std::size_t i = 0; i < voc.size(); ++i) {
    const SymbolInfo& s = voc.at(static_cast<int>(i));
    if (s.fixed) continue;
    auto& rows = out.tables[s.name];
    for (std::size_t off = 0; off < s.size; ++off) {
      Interpretation::Row row;
      const auto idx = decode(s, off);
      for (std::size_t a = 0; a < idx.size(); ++a)
        row.args.push_back(u.to_value(s.args[a], u.value_at(s.args[a], idx[a])));
      row.value = u.to_value(s.result, st.vals[i][off]);
      rows.push_back(std::move(row));
    }
  }
  return out;
}

std::vector<const Formula*> active_formulas(const FormulaSet& fs,
                                            const std::vector<std::string>& extra_symbols,
                                            std::set<std::string>* symbols) {
  std::vector<std::set<std::string>> syms;
  std::set<std::string> relevant(extra_symbols.begin(), extra_symbols.end());
  std::vector<bool> on(fs.formulas.size(), false);
  for (std::size_t i = 0; i < fs.formulas.size(); ++i) {
    syms.push_back(symbols_in(fs.sig, fs.formulas[i].expr));
    if (!fs.formulas[i].background) {
      on[i] = true;
      relevant.insert(syms[i].begin(), syms[i].end());
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < fs.formulas.size(); ++i) {
      if (on[i]) continue;
      if (std::none_of(syms[i].begin(), syms[i].end(),
                       [&](const std::string& s) { return relevant.count(s) > 0; }))
        continue;
      on[i] = changed = true;
      relevant.insert(syms[i].begin(), syms[i].end());
    }
  }
  std::vector<const Formula*> out;
  for (std::size_t i = 0; i < fs.formulas.size(); ++i)
    if (on[i]) out.push_back(&fs.formulas[i]);
  if (symbols) *symbols = std::move(relevant);
  return out;
}

}  // namespace l4::detail
