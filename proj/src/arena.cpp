#include "isynt/arena.hpp"

#include <stdexcept>

namespace isynt {

std::vector<predicate> arena::guard_predicates() const {
  std::set<predicate> set;
  for (auto& t : transitions)
    for (auto& p : collect_predicates(t.guard)) set.insert(p);
  return {set.begin(), set.end()};
}

lin_term arena::delta_of(const guarded_update& g, const lin_term& t) const {
  return t.substitute(g.update) - t;
}

bool eval_guard(const formula_ptr& g, const valuation& val,
                const boolset& inputs, const boolset& outputs) {
  switch (g->op) {
    case ltl_op::tt:
      return true;
    case ltl_op::ff:
      return false;
    case ltl_op::prop:
      return inputs.count(g->prop) || outputs.count(g->prop);
    case ltl_op::pred:
      return eval_predicate(*g->pred, nullptr, val);
    case ltl_op::not_:
      return !eval_guard(g->kids[0], val, inputs, outputs);
    case ltl_op::and_:
      for (auto& k : g->kids)
        if (!eval_guard(k, val, inputs, outputs)) return false;
      return true;
    case ltl_op::or_:
      for (auto& k : g->kids)
        if (eval_guard(k, val, inputs, outputs)) return true;
      return false;
    case ltl_op::implies:
      return !eval_guard(g->kids[0], val, inputs, outputs) ||
             eval_guard(g->kids[1], val, inputs, outputs);
    case ltl_op::iff:
      return eval_guard(g->kids[0], val, inputs, outputs) ==
             eval_guard(g->kids[1], val, inputs, outputs);
    default:
      throw std::logic_error("temporal operator in guard");
  }
}

size_t enabled_transition(const arena& a, const valuation& val,
                          const boolset& inputs, const boolset& outputs) {
  size_t found = a.transitions.size();
  for (size_t i = 0; i < a.transitions.size(); ++i) {
    if (!eval_guard(a.transitions[i].guard, val, inputs, outputs)) continue;
    if (found != a.transitions.size())
      throw std::runtime_error("arena not deterministic: guards " +
                               std::to_string(found) + " and " +
                               std::to_string(i) + " both enabled");
    found = i;
  }
  if (found == a.transitions.size())
    throw std::runtime_error("arena not total: no guard enabled");
  return found;
}

valuation step(const arena& a, const valuation& val, const boolset& inputs,
               const boolset& outputs) {
  const auto& t = a.transitions[enabled_transition(a, val, inputs, outputs)];
  valuation next = val;
  for (auto& [v, term] : t.update) next[v] = term.eval(val);
  return next;
}

}  // namespace isynt
