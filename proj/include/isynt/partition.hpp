#pragma once

#include "isynt/lia.hpp"

namespace isynt {

/// Per-term interval partition with binary cell encoding. The cuts
/// c_0 < ... < c_n induce n+2 cells in left-to-right order:
///   cell 0:            t <= c_0
///   cell 0 < i <= n:   !(t <= c_{i-1}) & t <= c_i
///   cell n+1:          !(t <= c_n)
/// Cells are pairwise contradictory and jointly exhaustive over the
/// integers; the two unbounded cells are the border cells. With no cuts
/// there is a single all-of-Z cell and no bits.
class term_partition {
 public:
  term_partition() = default;
  term_partition(lin_term term, std::vector<i64> cuts);

  const lin_term& term() const { return term_; }
  const std::vector<i64>& cuts() const { return cuts_; }
  size_t cell_count() const { return cuts_.size() + 1; }
  int bit_width() const { return bit_width_; }

  /// Cell codes are assigned in left-to-right binary order; bit patterns
  /// >= cell_count() are unused.
  size_t cell_code(size_t cell) const { return cell; }
  std::optional<size_t> cell_of_code(size_t code) const {
    return code < cell_count() ? std::optional<size_t>(code) : std::nullopt;
  }

  bool is_left_border(size_t cell) const { return cell == 0; }
  bool is_right_border(size_t cell) const { return cell + 1 == cell_count(); }

  /// Conjunction over Z denoting exactly cell i.
  std::vector<lin_constraint> cell_constraints(size_t cell) const;
  /// The predicates bounding cell i: (lower, upper); border cells lack one.
  std::optional<i64> cell_lower(size_t cell) const {  // exclusive: t > this
    return cell == 0 ? std::nullopt : std::optional<i64>(cuts_[cell - 1]);
  }
  std::optional<i64> cell_upper(size_t cell) const {  // inclusive: t <= this
    return cell == cuts_.size() ? std::nullopt
                                : std::optional<i64>(cuts_[cell]);
  }

  /// Which cell contains the point t = x.
  size_t cell_of_value(i64 x) const;

  /// Cell of a valuation (evaluates the term).
  size_t cell_at(const valuation& v) const { return cell_of_value(term_.eval(v)); }

  /// Border predicates used by acceleration assumptions.
  predicate left_border_predicate() const;   // t <= c_0
  predicate right_border_predicate() const;  // !(t <= c_n)

  bool operator==(const term_partition& o) const {
    return term_ == o.term_ && cuts_ == o.cuts_;
  }

 private:
  lin_term term_;          // canonical: positive leading coefficient
  std::vector<i64> cuts_;  // strictly increasing; may be empty
  int bit_width_ = 0;
};

/// Rewrites a predicate over the partition key of pred_key(p): predicates
/// over -t are merged into t with the bound negated and tightened.
struct keyed_pred {
  lin_term key;   // canonical term (positive leading coefficient)
  i64 cut;        // contributes cut: key <= cut or its negation
  bool negated_key;  // true if the original predicate was over -key
};
keyed_pred key_of(const predicate& p);

/// Ordered partition map keyed by canonical term.
using partition_map = std::map<lin_term, term_partition>;

/// Collect all the known predicates over the same term; predicates over -t
/// are rewritten over t first. Every input predicate is then expressible
/// as a disjunction of cells.
partition_map build_partitions(const std::vector<predicate>& preds);

/// Cell indices whose disjunction is equivalent to p over the integers.
/// Throws if p is not over tp's term (possibly via the -t rewrite).
std::vector<size_t> pred_to_cells(const predicate& p,
                                  const term_partition& tp);

/// New partition with one more cut plus the old-cell -> new-cells mapping
/// for abstraction reuse. Duplicate bounds are deduplicated silently.
struct extended_partition {
  term_partition partition;
  std::vector<std::vector<size_t>> cell_map;  // old cell -> new cells
};
extended_partition extend_partition(const term_partition& tp, i64 new_bound);

}  // namespace isynt
