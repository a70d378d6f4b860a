#include "isynt/validate.hpp"

#include <functional>

namespace isynt {

namespace {

// guard with booleans fixed: reduce props to constants, then DNF over
// predicate literals
formula_ptr specialise(const formula_ptr& g, const boolset& in,
                       const boolset& out) {
  return map_atoms(g, [&](const formula& a) -> formula_ptr {
    if (a.op != ltl_op::prop) return nullptr;
    bool v = in.count(a.prop) || out.count(a.prop);
    return v ? f_true() : f_false();
  });
}

void dnf_rec(const formula_ptr& f, bool neg, std::vector<predicate> acc,
             std::vector<std::vector<predicate>>& cubes) {
  switch (f->op) {
    case ltl_op::tt:
      if (neg) return;
      cubes.push_back(acc);
      return;
    case ltl_op::ff:
      if (!neg) return;
      cubes.push_back(acc);
      return;
    case ltl_op::pred: {
      acc.push_back(neg ? f->pred->negated() : *f->pred);
      cubes.push_back(acc);
      return;
    }
    case ltl_op::not_:
      dnf_rec(f->kids[0], !neg, std::move(acc), cubes);
      return;
    case ltl_op::and_:
    case ltl_op::or_: {
      bool conj = (f->op == ltl_op::and_) != neg;
      if (conj) {
        // sequential product: fold each child into the accumulator
        std::vector<std::vector<predicate>> partial{acc};
        for (auto& k : f->kids) {
          std::vector<std::vector<predicate>> next;
          for (auto& cube : partial) dnf_rec(k, neg, cube, next);
          partial = std::move(next);
        }
        for (auto& c : partial) cubes.push_back(std::move(c));
      } else {
        for (auto& k : f->kids) dnf_rec(k, neg, acc, cubes);
      }
      return;
    }
    case ltl_op::implies:
      if (neg) {  // a & !b
        std::vector<std::vector<predicate>> partial;
        dnf_rec(f->kids[0], false, acc, partial);
        for (auto& cube : partial) dnf_rec(f->kids[1], true, cube, cubes);
      } else {
        dnf_rec(f->kids[0], true, acc, cubes);
        dnf_rec(f->kids[1], false, acc, cubes);
      }
      return;
    case ltl_op::iff: {
      auto a = f->kids[0], b = f->kids[1];
      std::vector<std::vector<predicate>> pa;
      dnf_rec(a, neg, acc, pa);  // a & b (or !a' & b for neg)
      for (auto& cube : pa) dnf_rec(b, false, cube, cubes);
      std::vector<std::vector<predicate>> na;
      dnf_rec(a, !neg, acc, na);
      for (auto& cube : na) dnf_rec(b, true, cube, cubes);
      return;
    }
    case ltl_op::prop:
      throw std::logic_error("unexpanded boolean in guard cube");
    default:
      throw std::logic_error("temporal operator in guard");
  }
}

}  // namespace

std::vector<std::vector<predicate>> predicate_cubes(const formula_ptr& g,
                                                    const boolset& inputs,
                                                    const boolset& outputs) {
  std::vector<std::vector<predicate>> cubes;
  dnf_rec(specialise(g, inputs, outputs), false, {}, cubes);
  return cubes;
}

validation_report validate_arena(const arena& a, lia_solver& solver) {
  validation_report rep;
  std::vector<std::string> bools = a.env_bools;
  bools.insert(bools.end(), a.con_bools.begin(), a.con_bools.end());
  const size_t nb = bools.size();
  if (nb > 20) throw std::runtime_error("too many boolean variables");

  auto cube_sat = [&](const std::vector<predicate>& cube)
      -> std::optional<valuation> {
    std::vector<lin_constraint> cs;
    for (auto& p : cube) cs.push_back(constraint_of(p));
    auto r = solver.solve(cs);
    if (is_unknown(r))
      throw std::runtime_error("validate_arena: solver gave up");
    if (is_sat(r)) return std::get<lia_sat>(r).model;
    return std::nullopt;
  };
  auto complete = [&](valuation v) {
    for (auto& [n, init] : a.vars)
      if (!v.count(n)) v[n] = 0;
    return v;
  };

  for (size_t mask = 0; mask < (size_t{1} << nb); ++mask) {
    boolset in, out;
    for (size_t i = 0; i < nb; ++i)
      if (mask & (size_t{1} << i)) {
        if (i < a.env_bools.size())
          in.insert(bools[i]);
        else
          out.insert(bools[i]);
      }
    std::vector<std::vector<std::vector<predicate>>> cubes;
    for (auto& t : a.transitions)
      cubes.push_back(predicate_cubes(t.guard, in, out));

    // pairwise overlap
    for (size_t i = 0; i < cubes.size(); ++i)
      for (size_t j = i + 1; j < cubes.size(); ++j) {
        bool hit = false;
        for (auto& ci : cubes[i]) {
          for (auto& cj : cubes[j]) {
            auto joint = ci;
            joint.insert(joint.end(), cj.begin(), cj.end());
            if (auto w = cube_sat(joint)) {
              rep.overlaps.push_back({i, j, in, out, complete(*w)});
              hit = true;
              break;
            }
          }
          if (hit) break;
        }
      }

    // coverage: !(g_0 | ... | g_n) satisfiable?
    std::vector<formula_ptr> gs;
    for (auto& t : a.transitions)
      gs.push_back(specialise(t.guard, in, out));
    auto uncovered = f_not(f_or(std::move(gs)));
    std::vector<std::vector<predicate>> gap_cubes;
    dnf_rec(uncovered, false, {}, gap_cubes);
    for (auto& cube : gap_cubes) {
      if (auto w = cube_sat(cube)) {
        rep.gaps.push_back({in, out, complete(*w)});
        break;  // one witness per boolean class
      }
    }
  }
  return rep;
}

}  // namespace isynt
