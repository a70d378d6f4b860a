#pragma once

#include "isynt/abstraction.hpp"

namespace isynt {

/// The two per-term fairness assumptions of the eager encoding:
///   GF t_dec -> GF (t_inc | f_l)   and   GF t_inc -> GF (t_dec | f_r)
/// with f_l/f_r the current border cells. Regenerated with fresh borders
/// whenever safety refinement extends the partition, so a term never
/// carries more than two assumptions.
struct fairness_assumption {
  lin_term term;
  predicate dec_pred, inc_pred;            // eps = 1 transition predicates
  predicate left_border, right_border;     // border cells as predicates
  formula_ptr left_formula, right_formula;
};

/// Scans every transition's effect on t. Returns the least nonzero |delta|
/// when all non-stuttering changes are constant, 1 when changes are
/// provably nonzero, none when a change of 0 is possible (or t never
/// changes); solver trouble also yields none.
std::optional<i64> detect_bounded_updates(const arena& a, const lin_term& t,
                                          lia_solver& solver);

/// Fairness assumptions for a partitioned term, or none when
/// detect_bounded_updates finds no usable bound.
std::optional<fairness_assumption> emit_fairness(const arena& a,
                                                 const term_partition& tp,
                                                 lia_solver& solver);

/// Well-foundedness assumption extracted from a predicate: r decreasing
/// infinitely often with finitely many increases forces the invariant to
/// break. Encoded as GF r_dec -> GF (r_inc | !inv).
struct ranking_abstraction {
  ranking_function rank;
  lin_term group_term;  // canonical term whose inc/dec group encodes r
  formula_ptr formula;
};

/// Extract ranking abstractions from predicate literals appearing in the
/// given formulas (objective and optionally guards): a literal t <= c reads
/// as 0 <= c - t, making c - t a ranking function with the literal as its
/// invariant. Every result passes verify_ranking.
std::vector<ranking_abstraction> syntactic_rankings(
    const std::vector<formula_ptr>& sources, lia_solver& solver);

}  // namespace isynt
