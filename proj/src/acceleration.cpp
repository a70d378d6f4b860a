#include "isynt/acceleration.hpp"

namespace isynt {

std::optional<i64> detect_bounded_updates(const arena& a, const lin_term& t,
                                          lia_solver& solver) {
  std::optional<i64> eps;
  for (auto& tr : a.transitions) {
    lin_term d = a.delta_of(tr, t);
    if (d.is_constant() && d.constant() == 0) continue;  // stutters on t
    if (d.is_constant()) {
      i64 c = d.constant() < 0 ? -d.constant() : d.constant();
      eps = eps ? std::min(*eps, c) : c;
      continue;
    }
    // non-constant delta: usable only if it can never be zero
    auto r = solver.solve({{d, 0, constraint_sense::leq},
                           {-d, 0, constraint_sense::leq}});
    if (!is_unsat(r)) return std::nullopt;
    eps = eps ? std::min(*eps, i64{1}) : 1;
  }
  return eps;
}

std::optional<fairness_assumption> emit_fairness(const arena& a,
                                                 const term_partition& tp,
                                                 lia_solver& solver) {
  if (tp.cuts().empty()) return std::nullopt;
  if (!detect_bounded_updates(a, tp.term(), solver)) return std::nullopt;
  fairness_assumption fa;
  fa.term = tp.term();
  incdec_group g{tp.term()};
  fa.inc_pred = g.inc_pred();
  fa.dec_pred = g.dec_pred();
  fa.left_border = tp.left_border_predicate();
  fa.right_border = tp.right_border_predicate();
  auto gf = [](formula_ptr f) { return f_globally(f_eventually(f)); };
  fa.left_formula = f_implies(
      gf(f_pred(fa.dec_pred)),
      gf(f_or(f_pred(fa.inc_pred), f_pred(fa.left_border))));
  fa.right_formula = f_implies(
      gf(f_pred(fa.inc_pred)),
      gf(f_or(f_pred(fa.dec_pred), f_pred(fa.right_border))));
  return fa;
}

std::vector<ranking_abstraction> syntactic_rankings(
    const std::vector<formula_ptr>& sources, lia_solver& solver) {
  // collect literals with polarity: under an even number of negations a
  // pred node is the literal itself
  std::set<predicate> literals;
  std::function<void(const formula_ptr&, bool)> walk =
      [&](const formula_ptr& f, bool neg) {
        if (f->op == ltl_op::pred) {
          literals.insert(neg ? f->pred->negated() : *f->pred);
          return;
        }
        if (f->op == ltl_op::not_) {
          walk(f->kids[0], !neg);
          return;
        }
        if (f->op == ltl_op::implies) {
          walk(f->kids[0], !neg);
          walk(f->kids[1], neg);
          return;
        }
        if (f->op == ltl_op::iff) {  // both polarities occur
          for (auto& k : f->kids) {
            walk(k, false);
            walk(k, true);
          }
          return;
        }
        for (auto& k : f->kids) walk(k, neg);
      };
  for (auto& s : sources) walk(s, false);

  std::vector<ranking_abstraction> out;
  std::set<std::pair<lin_term, std::vector<predicate>>> seen;
  for (auto& lit : literals) {
    if (lit.is_constant() || lit.kind() != pred_kind::state) continue;
    // literal means  r >= lower  for  r = -term (leq) or r = term (not_leq)
    ranking_abstraction ra;
    if (lit.is_negated()) {
      // !(t <= c)  ==  t >= c+1
      ra.rank.term = lit.term();
      ra.rank.lower_bound = lit.bound() + 1;
    } else {
      ra.rank.term = -lit.term();
      ra.rank.lower_bound = -lit.bound();
    }
    ra.rank.invariant = {lit};
    if (seen.count({ra.rank.term, ra.rank.invariant})) continue;
    seen.insert({ra.rank.term, ra.rank.invariant});

    // the defining relation: r strictly decreases while inv holds
    lin_term r_prev = ra.rank.term.rename(prev_var);
    std::vector<lin_constraint> rel{
        {ra.rank.term - r_prev, -1, constraint_sense::leq}};
    std::vector<lin_constraint> guard;
    for (auto& p : ra.rank.invariant) {
      auto c = constraint_of(p);
      c.term = c.term.rename(prev_var);
      guard.push_back(c);
    }
    if (!verify_ranking(ra.rank, rel, guard, solver)) continue;

    // inc/dec of r map onto the canonical term's group
    auto k = key_of(predicate(ra.rank.term, 0));
    ra.group_term = k.key;
    incdec_group g{k.key};
    // r = key: r_dec = key_dec; r = -key: r_dec = key_inc
    predicate r_dec = k.negated_key ? g.inc_pred() : g.dec_pred();
    predicate r_inc = k.negated_key ? g.dec_pred() : g.inc_pred();
    auto gf = [](formula_ptr f) { return f_globally(f_eventually(f)); };
    std::vector<formula_ptr> invneg;
    for (auto& p : ra.rank.invariant) invneg.push_back(f_pred(p.negated()));
    ra.formula = f_implies(
        gf(f_pred(r_dec)),
        gf(f_or(f_pred(r_inc), f_or(std::move(invneg)))));
    out.push_back(std::move(ra));
  }
  return out;
}

}  // namespace isynt
