#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "isynt/predicate.hpp"

namespace isynt {

enum class ltl_op {
  tt,
  ff,
  prop,   // boolean proposition (env/con variable, cell bit, monitor bit)
  pred,   // theory atom
  not_,
  and_,
  or_,
  implies,
  iff,
  next,
  until,
  release,
  weak_until,
  eventually,
  globally,
};

struct formula;
using formula_ptr = std::shared_ptr<const formula>;

/// Immutable LTL node. Build through the f_* constructors below, which
/// flatten and/or, fold constants and keep children deterministically
/// ordered so structurally equal formulas compare equal.
struct formula {
  ltl_op op;
  std::string prop;               // for ltl_op::prop
  std::optional<predicate> pred;  // for ltl_op::pred
  std::vector<formula_ptr> kids;
  size_t hash = 0;

  bool is_literal() const {
    return op == ltl_op::prop || op == ltl_op::pred ||
           (op == ltl_op::not_ && (kids[0]->op == ltl_op::prop ||
                                   kids[0]->op == ltl_op::pred));
  }
  bool is_temporal() const {
    switch (op) {
      case ltl_op::next:
      case ltl_op::until:
      case ltl_op::release:
      case ltl_op::weak_until:
      case ltl_op::eventually:
      case ltl_op::globally:
        return true;
      default:
        return false;
    }
  }
  std::string str() const;
};

bool equal(const formula_ptr& a, const formula_ptr& b);
// Total deterministic order (by content, not pointers).
int compare(const formula_ptr& a, const formula_ptr& b);

formula_ptr f_true();
formula_ptr f_false();
formula_ptr f_prop(const std::string& name);
formula_ptr f_pred(const predicate& p);
formula_ptr f_not(formula_ptr a);
formula_ptr f_and(std::vector<formula_ptr> kids);
formula_ptr f_or(std::vector<formula_ptr> kids);
formula_ptr f_and(formula_ptr a, formula_ptr b);
formula_ptr f_or(formula_ptr a, formula_ptr b);
formula_ptr f_implies(formula_ptr a, formula_ptr b);
formula_ptr f_iff(formula_ptr a, formula_ptr b);
formula_ptr f_next(formula_ptr a);
formula_ptr f_until(formula_ptr a, formula_ptr b);
formula_ptr f_release(formula_ptr a, formula_ptr b);
formula_ptr f_weak_until(formula_ptr a, formula_ptr b);
formula_ptr f_eventually(formula_ptr a);
formula_ptr f_globally(formula_ptr a);

/// Negation normal form over {tt,ff,literal,and,or,X,U,R}; F, G, W and the
/// boolean connectives ->, <-> are expanded away.
formula_ptr to_nnf(const formula_ptr& f, bool negate = false);

/// All distinct subformulas, parents after children.
std::vector<formula_ptr> subformulas(const formula_ptr& f);

/// Replace atoms through a callback (nullptr keeps the atom).
formula_ptr map_atoms(
    const formula_ptr& f,
    const std::function<formula_ptr(const formula&)>& fn);

/// Collect theory atoms (positive form) appearing anywhere in f.
std::vector<predicate> collect_predicates(const formula_ptr& f);

}  // namespace isynt
