#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <memory>
#include <variant>
#include <vector>

#include "isynt/predicate.hpp"

namespace isynt {

using bigint = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

enum class constraint_sense { leq, eq };

/// term <= bound or term = bound over arbitrary (possibly indexed) variables.
struct lin_constraint {
  lin_term term;
  i64 bound = 0;
  constraint_sense sense = constraint_sense::leq;

  std::string str() const {
    return term.str() + (sense == constraint_sense::eq ? " = " : " <= ") +
           std::to_string(bound);
  }
};

/// Constraint form of a predicate literal; negation is tightened over the
/// integers: !(t <= c) becomes -t <= -c-1.
lin_constraint constraint_of(const predicate& p);
/// t = bound as a single constraint.
inline lin_constraint eq_constraint(lin_term t, i64 b) {
  return {std::move(t), b, constraint_sense::eq};
}

/// Proof of unsatisfiability. A leaf combines input constraints (and the
/// branch bounds on the path to it) with nonnegative multipliers into
/// 0 <= negative. Branch nodes split an integer variable at a value.
struct farkas_certificate {
  struct used_constraint {
    int input_index;   // -1 for a branch bound
    int branch_index;  // index into path bounds, -1 for input constraints
    bool flipped;      // true: used the >= side of an equality, negated
    rational multiplier;
  };
  struct branch_bound {
    std::string var;
    i64 bound;
    bool upper;  // var <= bound, else var >= bound
  };
  struct node {
    std::vector<used_constraint> leaf;  // nonempty for leaves
    // a divisibility leaf witnesses an equality t = b whose coefficient
    // gcd does not divide b (integer infeasible, rationally feasible)
    bool divisibility = false;
    // for branch nodes:
    std::string var;
    i64 split = 0;  // left: var <= split, right: var >= split+1
    std::unique_ptr<node> left, right;
    bool is_leaf() const { return !left; }
  };
  std::unique_ptr<node> root;
};

struct lia_sat {
  valuation model;
};
struct lia_unsat {
  farkas_certificate cert;
};
struct lia_unknown {
  std::string reason;
};
using lia_result = std::variant<lia_sat, lia_unsat, lia_unknown>;

inline bool is_sat(const lia_result& r) {
  return std::holds_alternative<lia_sat>(r);
}
inline bool is_unsat(const lia_result& r) {
  return std::holds_alternative<lia_unsat>(r);
}
inline bool is_unknown(const lia_result& r) {
  return std::holds_alternative<lia_unknown>(r);
}

struct lia_limits {
  int branch_depth = 64;
  long pivot_limit = 200000;
  long node_limit = 20000;  // branch-and-bound nodes per query
};

/// Decision procedure for conjunctions of linear integer constraints.
/// Exact rational simplex plus branch-and-bound; never mislabels, reports
/// unknown when a limit is hit. Instances are single-threaded; create one
/// per caller.
class lia_solver {
 public:
  explicit lia_solver(lia_limits lim = {}) : lim_(lim) {}

  lia_result solve(const std::vector<lin_constraint>& cs);

  /// Satisfiability helper that throws on unknown.
  bool sat(const std::vector<lin_constraint>& cs);
  /// cs entails (t <= b) over the integers.
  bool entails(const std::vector<lin_constraint>& cs, const lin_term& t,
               i64 b);

  long queries() const { return queries_; }

 private:
  lia_limits lim_;
  long queries_ = 0;
};

/// Exact replay of an unsat certificate against the constraints it refutes.
bool check_certificate(const std::vector<lin_constraint>& cs,
                       const farkas_certificate& cert);

/// Sequence interpolation for an unsatisfiable chain f_0,...,f_k with
/// adjacent-only variable sharing. Returns I_1..I_k (one predicate set per
/// cut) with f_0 => I_1, I_i & f_i => I_{i+1}, I_k & f_k unsat; every
/// condition is re-checked by the solver before returning.
struct interp_failure {
  bool integer_only = false;  // rationally feasible path, Farkas defeated
  std::string reason;
};
using interp_result =
    std::variant<std::vector<std::vector<predicate>>, interp_failure>;

interp_result sequence_interpolants(
    const std::vector<std::vector<lin_constraint>>& fs,
    lia_solver& solver);

/// Affine ranking function over V: term strictly decreases under the loop
/// relation and is bounded below under the invariant.
struct ranking_function {
  lin_term term;                     // over V
  std::vector<predicate> invariant;  // state predicate conjunction
  i64 lower_bound = 0;
};

/// Podelski-Rybalchenko style template synthesis: finds integer c, b0 and
/// nonnegative Farkas multipliers such that guard & rel => r_prev >= r + 1
/// and guard => r >= b0. Coefficients are searched in a bounded box; none
/// is not a proof of nontermination.
std::optional<ranking_function> synth_linear_ranking(
    const std::vector<lin_constraint>& rel,
    const std::vector<lin_constraint>& guard_prev,
    const std::vector<predicate>& invariant, lia_solver& solver);

/// Independent check of the two ranking entailments (two unsat queries).
bool verify_ranking(const ranking_function& r,
                    const std::vector<lin_constraint>& rel,
                    const std::vector<lin_constraint>& guard_prev,
                    lia_solver& solver);

}  // namespace isynt
