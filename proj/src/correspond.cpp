#include <algorithm>
#include <map>

#include "l4/classical.hpp"
#include "l4/errors.hpp"
#include "l4/expr_util.hpp"
#include "l4/inversion.hpp"
#include "model.hpp"

namespace l4 {

namespace {

using detail::State;

std::vector<Rule> user_rules(const RuleModule& m) {
  std::vector<Rule> out;
  for (const auto& r : m.rules)
    if (!r.system) out.push_back(r);
  return out;
}

// Index of a symbol's table in `from`, which must interpret it with the same
// layout.
int same_table(const detail::Vocabulary& from, const detail::Vocabulary& to, int i) {
  const detail::SymbolInfo& s = to.at(i);
  const int j = from.find(s.name);
  if (j < 0 || from.at(j).size != s.size)
    throw UnsupportedError("symbol '" + s.name + "' is not shared by both variants");
  return j;
}

std::optional<std::string> first_violation(const detail::RawEnumeration& target, const State& st) {
  std::vector<std::int64_t> env(static_cast<std::size_t>(std::max(target.prog.slots, 1)));
  for (std::size_t f = 0; f < target.prog.roots.size(); ++f) {
    const detail::TV t = detail::eval(target.prog, target.voc, st, target.prog.roots[f], env);
    if (!t.known || !t.v) return target.prog.origins[f];
  }
  return std::nullopt;
}

}  // namespace

CorrespondenceReport check_model_correspondence(const RuleModule& annotated, const Bounds& bounds,
                                                const SearchOptions& opts) {
  const PipelineResult pv = run_pipeline(annotated, {RestrictionVariant::ViaPrecondition, false});
  const PipelineResult dv = run_pipeline(annotated, {RestrictionVariant::ViaDerivability, false});
  const FormulaSet fp = rules_to_formulas(pv.module);
  const FormulaSet fd = rules_to_formulas(dv.module);

  std::map<std::string, std::string> lifted;  // P⁺ -> P
  for (const auto& p : transformable_predicates(user_rules(pv.module))) lifted[lifted_name(p)] = p;
  auto is_base = [&](const std::string& s) {
    return std::any_of(lifted.begin(), lifted.end(), [&](const auto& kv) { return kv.second == s; });
  };

  std::set<std::string> rel_p, rel_d;
  detail::active_formulas(fp, {}, &rel_p);
  detail::active_formulas(fd, {}, &rel_d);
  SearchOptions op = opts, od = opts;
  op.extra_symbols.clear();
  od.extra_symbols.clear();
  for (const auto& s : rel_d)
    if (!lifted.count(s) && !rel_p.count(s)) op.extra_symbols.push_back(s);
  for (const auto& s : rel_p)
    if (!is_base(s) && !rel_d.count(s)) od.extra_symbols.push_back(s);
  for (const auto& [lp, p] : lifted)
    if (rel_d.count(lp) && !rel_p.count(p)) op.extra_symbols.push_back(p);

  detail::RawEnumeration mp = detail::enumerate_raw(fp, bounds, op);
  detail::RawEnumeration md = detail::enumerate_raw(fd, bounds, od);

  CorrespondenceReport rep;
  rep.precond_models = mp.models.size();
  rep.deriv_models = md.models.size();
  rep.nodes = mp.nodes + md.nodes;

  // Preconditions of the final precondition-variant rules, by rule name.
  detail::Program pre;
  std::map<std::string, int> pre_root;
  const std::size_t vocab_size = mp.voc.size();
  for (const auto& r : user_rules(pv.module)) {
    if (!is_base(atom_predicate(r.postcond))) continue;
    const NormalizedRule n = normalize_rule(fp.sig, r);
    std::vector<std::string> params;
    for (const auto& q : n.params) params.push_back(q.name);
    pre_root[r.name] = detail::compile(pre, mp.voc, n.precond, params);
  }
  if (mp.voc.size() != vocab_size)
    throw UnsupportedError("rule preconditions mention symbols outside the formula set");

  const detail::Universe& u = mp.voc.universe();
  for (std::size_t k = 0; k < mp.models.size(); ++k) {
    const State& src = mp.models[k];
    State st = State::empty(md.voc);
    std::vector<std::int64_t> env(static_cast<std::size_t>(std::max(pre.slots, 1)));
    for (std::size_t i = 0; i < md.voc.size(); ++i) {
      const detail::SymbolInfo& s = md.voc.at(static_cast<int>(i));
      if (s.fixed) continue;
      auto lp = lifted.find(s.name);
      if (lp == lifted.end()) {
        st.vals[i] = src.vals[static_cast<std::size_t>(same_table(mp.voc, md.voc, static_cast<int>(i)))];
        std::fill(st.known[i].begin(), st.known[i].end(), 1);
        continue;
      }
      const auto& names = md.voc.universe().carriers().at(s.args.front().sort);
      for (std::size_t off = 0; off < s.size; ++off) {
        const auto idx = detail::decode(s, off);
        auto root = pre_root.find(names.at(idx[0]));
        if (root == pre_root.end())
          throw TransformError("no precondition-variant rule named '" + names.at(idx[0]) + "'");
        for (std::size_t a = 1; a < idx.size(); ++a) env[a - 1] = u.value_at(s.args[a], idx[a]);
        const detail::TV t = detail::eval(pre, mp.voc, src, root->second, env);
        st.vals[i][off] = t.known && t.v ? 1 : 0;
        st.known[i][off] = 1;
      }
    }
    if (auto bad = first_violation(md, st))
      rep.violations.push_back(CorrespondenceViolation{"precond->deriv", k, *bad,
                                                       detail::to_interpretation(mp.voc, src),
                                                       detail::to_interpretation(md.voc, st)});
  }

  for (std::size_t k = 0; k < md.models.size(); ++k) {
    const State& src = md.models[k];
    State st = State::empty(mp.voc);
    for (std::size_t i = 0; i < mp.voc.size(); ++i) {
      const detail::SymbolInfo& s = mp.voc.at(static_cast<int>(i));
      if (s.fixed) continue;
      std::fill(st.known[i].begin(), st.known[i].end(), 1);
      const int j = is_base(s.name) ? md.voc.find(lifted_name(s.name)) : -1;
      if (j < 0) {
        st.vals[i] = src.vals[static_cast<std::size_t>(same_table(md.voc, mp.voc, static_cast<int>(i)))];
        continue;
      }
      // P ā holds iff P⁺ rn ā holds for some rule name rn.
      const std::size_t rules = md.voc.at(j).args.front().size;
      for (std::size_t off = 0; off < s.size; ++off) {
        std::int64_t v = 0;
        for (std::size_t rn = 0; rn < rules && !v; ++rn)
          v = src.vals[static_cast<std::size_t>(j)][rn * s.size + off];
        st.vals[i][off] = v;
      }
    }
    if (auto bad = first_violation(mp, st))
      rep.violations.push_back(CorrespondenceViolation{"deriv->precond", k, *bad,
                                                       detail::to_interpretation(md.voc, src),
                                                       detail::to_interpretation(mp.voc, st)});
  }
  return rep;
}

}  // namespace l4
