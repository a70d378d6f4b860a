#pragma once

#include <optional>

#include "isynt/linterm.hpp"

namespace isynt {

/// A total integer valuation of a variable set.
using valuation = std::map<std::string, i64>;

enum class polarity { leq, not_leq };
enum class pred_kind { state, transition };

/// Canonical linear-integer atom, meaning term <= bound or its negation.
/// Strict and >=/= comparisons are eliminated at construction by integer
/// tightening, and the coefficient gcd is divided out (flooring the bound),
/// so semantically equal atoms compare equal.
class predicate {
 public:
  predicate() : bound_(0), pol_(polarity::leq) {}  // 0 <= 0, i.e. true
  predicate(lin_term t, i64 bound, polarity p = polarity::leq)
      : term_(std::move(t)), bound_(bound), pol_(p) {
    i64 k = term_.constant();
    if (k != 0) {  // fold the term's constant into the bound
      term_.set_constant(0);
      bound_ -= k;
    }
    i64 g = term_.content();
    if (g > 1) {
      term_ = divide(term_, g);
      bound_ = floor_div(bound_, g);
    }
  }

  static predicate false_pred() { return predicate(lin_term(), -1); }
  static predicate true_pred() { return predicate(lin_term(), 0); }

  const lin_term& term() const { return term_; }
  i64 bound() const { return bound_; }
  polarity pol() const { return pol_; }
  bool is_negated() const { return pol_ == polarity::not_leq; }

  pred_kind kind() const {
    return term_.has_prev_vars() ? pred_kind::transition : pred_kind::state;
  }
  bool is_constant() const { return term_.is_constant(); }
  bool constant_value() const {  // truth when is_constant()
    bool leq_holds = 0 <= bound_;
    return pol_ == polarity::leq ? leq_holds : !leq_holds;
  }

  predicate negated() const {
    predicate p = *this;
    p.pol_ = pol_ == polarity::leq ? polarity::not_leq : polarity::leq;
    return p;
  }
  /// The underlying positive atom (polarity leq).
  predicate atom() const {
    predicate p = *this;
    p.pol_ = polarity::leq;
    return p;
  }

  bool operator==(const predicate& o) const {
    return pol_ == o.pol_ && bound_ == o.bound_ && term_ == o.term_;
  }
  bool operator<(const predicate& o) const {
    if (!(term_ == o.term_)) return term_ < o.term_;
    if (bound_ != o.bound_) return bound_ < o.bound_;
    return pol_ < o.pol_;
  }

  std::string str() const;

  static i64 floor_div(i64 a, i64 b) {
    i64 q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
  }
  static lin_term divide(const lin_term& t, i64 g) {
    lin_term r(t.constant() / g);
    for (auto& [v, c] : t.coeffs()) r.set_coeff(v, c / g);
    return r;
  }

 private:
  lin_term term_;  // constant part always folded into bound_
  i64 bound_;
  polarity pol_;
};

/// Truth of p under a valuation pair. prev must be present iff p relates
/// two states; a transition predicate with no predecessor state is false
/// by convention.
inline bool eval_predicate(const predicate& p, const valuation* prev,
                           const valuation& cur) {
  if (p.kind() == pred_kind::transition) {
    if (prev == nullptr) return false;
    valuation joint = cur;
    for (auto& [v, x] : *prev) joint[prev_var(v)] = x;
    bool leq = p.term().eval(joint) <= p.bound();
    return p.is_negated() ? !leq : leq;
  }
  bool leq = p.term().eval(cur) <= p.bound();
  return p.is_negated() ? !leq : leq;
}

}  // namespace isynt
