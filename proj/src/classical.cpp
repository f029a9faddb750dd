#include "l4/classical.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "l4/errors.hpp"
#include "l4/inversion.hpp"
#include "model.hpp"

namespace l4 {

namespace {

Expr close_over(const std::vector<Param>& params, Expr body) {
  for (auto it = params.rbegin(); it != params.rend(); ++it)
    body = Expr::forall(it->name, it->type, body);
  return body;
}

bool contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

FormulaSet rules_to_formulas(const RuleModule& m, const FormulaOptions& opts) {
  for (const auto& r : m.rules)
    if (r.annotation)
      throw TransformError("rule '" + r.name + "' still carries modifiers; eliminate them first",
                           r.loc);
  const RuleModule em = elaborate(m);
  FormulaSet fs;
  fs.sig = Signature(em);
  for (const auto& d : opts.delete_rules)
    if (!em.find_rule(d)) throw NameError("cannot delete unknown rule '" + d + "'");

  std::vector<Rule> active;
  for (const auto& r : em.rules) {
    if (contains(opts.delete_rules, r.name)) continue;
    active.push_back(r);
    const Expr body = r.is_fact() ? r.postcond : Expr::implies(r.precond, r.postcond);
    fs.formulas.push_back(Formula{r.name, close_over(r.params, body), r.system});
  }
  for (const auto& s : fs.sig.sorts()) {
    if (fs.sig.is_enum(s)) continue;
    fs.formulas.push_back(Formula{
        "sort:" + s,
        Expr::forall("x", LType::cls(s), Expr::app(Expr::var(char_pred_name(s)), Expr::var("x"))),
        true});
  }
  for (const auto& g : em.globals) {
    if (!g.type.is_class()) continue;
    const std::string& c = g.type.name();
    if (fs.sig.is_sort(c) || fs.sig.is_enum(c)) continue;
    fs.formulas.push_back(
        Formula{"type:" + g.name, Expr::app(Expr::var(char_pred_name(c)), Expr::var(g.name)), true});
  }

  std::vector<std::string> preds;
  if (opts.inversions == InversionScope::Transformable) {
    preds = transformable_predicates(active);
  } else if (opts.inversions == InversionScope::AllPredicates) {
    std::vector<std::string> user;
    for (const auto& d : m.decls) user.push_back(d.name);
    for (const auto& g : m.globals) user.push_back(g.name);
    for (const auto& s : fs.sig.symbol_order()) {
      if (!contains(user, s) || fs.sig.is_generated(s)) continue;
      if (fs.sig.symbol(s)->result_type().is(LType::Kind::Boolean)) preds.push_back(s);
    }
  }
  for (const auto& p : preds) {
    fs.formulas.push_back(Formula{"inv:" + p, inversion_formula(fs.sig, active, p), false});
    fs.inverted.push_back(p);
  }
  return fs;
}

FormulaOptions options_for(const RuleModule& m, const Assertion& a, InversionScope scope) {
  for (const auto& r : a.add_rules)
    if (!m.find_rule(r))
      throw NameError("assertion '" + a.name + "' adds unknown rule '" + r + "'", a.loc);
  for (const auto& r : a.delete_rules)
    if (!m.find_rule(r))
      throw NameError("assertion '" + a.name + "' deletes unknown rule '" + r + "'", a.loc);
  FormulaOptions o;
  o.inversions = scope;
  o.delete_rules = a.delete_rules;
  return o;
}

std::string value_text(const Value& v) {
  if (const bool* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  return std::get<std::string>(v);
}

const Value& Interpretation::at(const std::string& symbol, const std::vector<Value>& args) const {
  for (const auto& row : tables.at(symbol))
    if (row.args == args) return row.value;
  throw std::out_of_range("no entry of '" + symbol + "' for the given arguments");
}

namespace {

nlohmann::json to_json_value(const Value& v) {
  if (const bool* b = std::get_if<bool>(&v)) return *b;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  return std::get<std::string>(v);
}

}  // namespace

std::string Interpretation::to_json() const {
  nlohmann::json j;
  j["sorts"] = nlohmann::json::object();
  for (const auto& [s, elems] : carriers) j["sorts"][s] = elems;
  j["tables"] = nlohmann::json::object();
  for (const auto& [sym, rows] : tables) {
    nlohmann::json t = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json row = nlohmann::json::array();
      for (const auto& a : r.args) row.push_back(to_json_value(a));
      row.push_back(to_json_value(r.value));
      t.push_back(std::move(row));
    }
    j["tables"][sym] = std::move(t);
  }
  return j.dump();
}

namespace detail {

namespace {

struct Entry {
  int sym;
  std::size_t offset;
};

struct ChunkResult {
  std::vector<State> models;
  std::uint64_t nodes = 0;
  bool over = false;
  bool cancelled = false;
};

class Search {
 public:
  Search(const Program& prog, const Vocabulary& voc, const SearchOptions& opts)
      : prog_(prog), voc_(voc), opts_(opts), watchers_(voc.size()) {
    std::vector<int> order;
    for (std::size_t i = 0; i < voc.size(); ++i)
      if (!voc.at(static_cast<int>(i)).fixed) order.push_back(static_cast<int>(i));
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return voc.at(a).name < voc.at(b).name; });
    for (int s : order)
      for (std::size_t off = 0; off < voc.at(s).size; ++off) entries_.push_back(Entry{s, off});
    for (std::size_t f = 0; f < prog.roots.size(); ++f)
      for (int s : prog.symbols_of[f]) watchers_[static_cast<std::size_t>(s)].push_back(f);
    env_size_ = static_cast<std::size_t>(std::max(prog.slots, 1));

    std::size_t chunks = 1;
    while (prefix_ < entries_.size() && chunks < 64) chunks *= radix(prefix_++);
    chunks_ = chunks;
  }

  std::size_t chunks() const { return chunks_; }

  // Every formula already decided is true in the empty state.
  bool root_consistent() const {
    State st = State::empty(voc_);
    std::vector<std::int64_t> env(env_size_);
    for (int r : prog_.roots) {
      const TV t = eval(prog_, voc_, st, r, env);
      if (t.known && !t.v) return false;
    }
    return true;
  }

  template <class Cancel>
  ChunkResult run_chunk(std::size_t chunk, Cancel cancel) const {
    ChunkResult res;
    State st = State::empty(voc_);
    std::vector<std::int64_t> env(env_size_);
    std::vector<std::size_t> digits(prefix_);
    for (std::size_t k = prefix_; k-- > 0;) {
      digits[k] = chunk % radix(k);
      chunk /= radix(k);
    }
    for (std::size_t k = 0; k < prefix_; ++k) {
      ++res.nodes;
      assign(st, k, digits[k]);
      if (!consistent(st, entries_[k].sym, env)) return res;
    }
    dfs(st, prefix_, env, res, cancel);
    return res;
  }

 private:
  std::size_t radix(std::size_t k) const { return voc_.at(entries_[k].sym).result.size; }

  void assign(State& st, std::size_t k, std::size_t i) const {
    const Entry& e = entries_[k];
    const auto s = static_cast<std::size_t>(e.sym);
    st.vals[s][e.offset] = voc_.universe().value_at(voc_.at(e.sym).result, i);
    st.known[s][e.offset] = 1;
  }

  bool consistent(const State& st, int sym, std::vector<std::int64_t>& env) const {
    for (std::size_t f : watchers_[static_cast<std::size_t>(sym)]) {
      const TV t = eval(prog_, voc_, st, prog_.roots[f], env);
      if (t.known && !t.v) return false;
    }
    return true;
  }

  template <class Cancel>
  void dfs(State& st, std::size_t k, std::vector<std::int64_t>& env, ChunkResult& res,
           Cancel& cancel) const {
    if (k == entries_.size()) {
      res.models.push_back(st);
      return;
    }
    const Entry& e = entries_[k];
    for (std::size_t i = 0; i < radix(k); ++i) {
      if (++res.nodes > opts_.node_budget) {
        res.over = true;
        return;
      }
      if ((res.nodes & 1023) == 0 && cancel()) {
        res.cancelled = true;
        return;
      }
      assign(st, k, i);
      if (consistent(st, e.sym, env)) dfs(st, k + 1, env, res, cancel);
      if (res.over || res.cancelled || res.models.size() >= opts_.max_models) break;
    }
    st.known[static_cast<std::size_t>(e.sym)][e.offset] = 0;
  }

  const Program& prog_;
  const Vocabulary& voc_;
  const SearchOptions& opts_;
  std::vector<Entry> entries_;
  std::vector<std::vector<std::size_t>> watchers_;
  std::size_t env_size_ = 1;
  std::size_t prefix_ = 0;
  std::size_t chunks_ = 1;
};

[[noreturn]] void over_budget(std::uint64_t budget) {
  throw ResourceLimit("model search exceeded the node budget of " + std::to_string(budget));
}

}  // namespace

RawEnumeration enumerate_raw(const FormulaSet& fs, const Bounds& bounds, const SearchOptions& opts) {
  RawEnumeration out{Vocabulary(Universe(fs.sig, bounds)), Program{}, {}, 0};
  std::set<std::string> relevant;
  const auto active = active_formulas(fs, opts.extra_symbols, &relevant);
  for (const auto& s : relevant) out.voc.add(s);
  for (const Formula* f : active) {
    out.prog.roots.push_back(compile(out.prog, out.voc, f->expr));
    out.prog.origins.push_back(f->origin);
    std::set<int> ids;
    for (const auto& s : symbols_in(fs.sig, f->expr)) ids.insert(out.voc.find(s));
    out.prog.symbols_of.push_back(std::move(ids));
  }
  if (opts.max_models == 0) return out;

  const Search search(out.prog, out.voc, opts);
  if (!search.root_consistent()) return out;

  const std::size_t n = search.chunks();
  std::vector<ChunkResult> results(n);
  const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    std::size_t found = 0;
    for (std::size_t c = 0; c < n && found < opts.max_models; ++c) {
      results[c] = search.run_chunk(c, [] { return false; });
      found += results[c].models.size();
      if (results[c].over) break;
    }
  } else {
    // A chunk may stop early once the chunks before it already hold enough
    // models; it is then never looked at during the merge.
    std::vector<std::atomic<std::int64_t>> done(n);
    for (auto& d : done) d.store(-1);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t c; (c = next.fetch_add(1)) < n;) {
        auto cancel = [&, c] {
          std::size_t before = 0;
          for (std::size_t j = 0; j < c; ++j) {
            const std::int64_t m = done[j].load();
            if (m > 0) before += static_cast<std::size_t>(m);
          }
          return before >= opts.max_models;
        };
        results[c] = search.run_chunk(c, cancel);
        done[c].store(static_cast<std::int64_t>(results[c].models.size()));
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (std::size_t c = 0; c < n && out.models.size() < opts.max_models; ++c) {
    ChunkResult& r = results[c];
    out.nodes += r.nodes;
    if (r.over || out.nodes > opts.node_budget) over_budget(opts.node_budget);
    for (auto& m : r.models) {
      if (out.models.size() >= opts.max_models) break;
      out.models.push_back(std::move(m));
    }
  }
  return out;
}

}  // namespace detail

EnumerationResult enumerate_models(const FormulaSet& fs, const Bounds& bounds,
                                   const SearchOptions& opts) {
  const auto raw = detail::enumerate_raw(fs, bounds, opts);
  EnumerationResult out;
  out.nodes = raw.nodes;
  for (const auto& st : raw.models) out.models.push_back(detail::to_interpretation(raw.voc, st));
  return out;
}

const char* status_text(AssertionResult::Status s) {
  switch (s) {
    case AssertionResult::Status::Valid: return "valid";
    case AssertionResult::Status::CounterModel: return "countermodel";
    case AssertionResult::Status::Satisfiable: return "satisfiable";
    case AssertionResult::Status::Unsatisfiable: return "unsatisfiable";
  }
  return "";
}

AssertionResult check_assertion(const FormulaSet& fs, const Assertion& a, const Bounds& bounds,
                                const SearchOptions& opts) {
  FormulaSet goal = fs;
  const bool valid_mode = a.mode == AssertMode::Valid;
  goal.formulas.push_back(
      Formula{"assert:" + a.name, valid_mode ? Expr::not_(a.formula) : a.formula, false});
  SearchOptions o = opts;
  o.max_models = 1;
  const auto r = enumerate_models(goal, bounds, o);
  AssertionResult out;
  out.nodes = r.nodes;
  if (r.models.empty()) {
    out.status = valid_mode ? AssertionResult::Status::Valid
                            : AssertionResult::Status::Unsatisfiable;
  } else {
    out.status = valid_mode ? AssertionResult::Status::CounterModel
                            : AssertionResult::Status::Satisfiable;
    out.model = r.models.front();
  }
  return out;
}

}  // namespace l4
