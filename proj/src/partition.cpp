#include "isynt/partition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace isynt {

term_partition::term_partition(lin_term term, std::vector<i64> cuts)
    : term_(std::move(term)), cuts_(std::move(cuts)) {
  if (term_.constant() != 0)
    throw std::logic_error("partition term must have no constant part");
  if (term_.leading_coeff() < 0)
    throw std::logic_error("partition term must have positive leading coeff");
  std::sort(cuts_.begin(), cuts_.end());
  cuts_.erase(std::unique(cuts_.begin(), cuts_.end()), cuts_.end());
  size_t n = cell_count();
  bit_width_ = 0;
  while ((size_t{1} << bit_width_) < n) ++bit_width_;
}

std::vector<lin_constraint> term_partition::cell_constraints(
    size_t cell) const {
  if (cell >= cell_count()) throw std::out_of_range("cell index");
  std::vector<lin_constraint> cs;
  if (auto lo = cell_lower(cell))  // !(t <= lo): -t <= -lo-1
    cs.push_back({-term_, -*lo - 1, constraint_sense::leq});
  if (auto hi = cell_upper(cell)) cs.push_back({term_, *hi, constraint_sense::leq});
  return cs;
}

size_t term_partition::cell_of_value(i64 x) const {
  size_t i = 0;
  while (i < cuts_.size() && x > cuts_[i]) ++i;
  return i;
}

predicate term_partition::left_border_predicate() const {
  if (cuts_.empty()) return predicate::true_pred();
  return predicate(term_, cuts_.front());
}
predicate term_partition::right_border_predicate() const {
  if (cuts_.empty()) return predicate::true_pred();
  return predicate(term_, cuts_.back(), polarity::not_leq);
}

keyed_pred key_of(const predicate& p) {
  // -t <= c becomes t >= -c, i.e. !(t <= -c-1)
  lin_term t = p.term();
  if (t.leading_coeff() < 0)
    return {-t, -p.bound() - 1, true};
  return {t, p.bound(), false};
}

partition_map build_partitions(const std::vector<predicate>& preds) {
  std::map<lin_term, std::vector<i64>> cuts;
  for (auto& p : preds) {
    if (p.is_constant()) continue;
    if (p.kind() != pred_kind::state)
      throw std::logic_error("build_partitions: transition predicate");
    auto k = key_of(p.atom());
    cuts[k.key].push_back(k.cut);
  }
  partition_map out;
  for (auto& [t, cs] : cuts) out.emplace(t, term_partition(t, cs));
  return out;
}

std::vector<size_t> pred_to_cells(const predicate& p,
                                  const term_partition& tp) {
  auto k = key_of(p.atom());
  if (!(k.key == tp.term()))
    throw std::invalid_argument("predicate over foreign term");
  // atom means key <= k.cut (or its complement if the key was negated);
  // the original predicate's polarity then flips once more.
  bool leq_side = !k.negated_key;
  if (p.is_negated()) leq_side = !leq_side;
  std::vector<size_t> cells;
  for (size_t i = 0; i < tp.cell_count(); ++i) {
    // cell (lo, hi] lies inside (key <= cut) iff hi <= cut, outside iff
    // lo >= cut; anything else straddles the cut and means the predicate
    // was never folded into this partition.
    auto lo = tp.cell_lower(i), hi = tp.cell_upper(i);
    bool inside = hi && *hi <= k.cut;
    bool outside = lo && *lo >= k.cut;
    if (!inside && !outside)
      throw std::invalid_argument("predicate cut not aligned with partition");
    if (inside == leq_side) cells.push_back(i);
  }
  return cells;
}

extended_partition extend_partition(const term_partition& tp, i64 new_bound) {
  auto cuts = tp.cuts();
  cuts.push_back(new_bound);
  term_partition np(tp.term(), cuts);
  extended_partition out{np, {}};
  out.cell_map.resize(tp.cell_count());
  for (size_t i = 0; i < tp.cell_count(); ++i) {
    for (size_t j = 0; j < np.cell_count(); ++j) {
      // new cell j is inside old cell i iff their intervals nest
      auto lo_i = tp.cell_lower(i), hi_i = tp.cell_upper(i);
      auto lo_j = np.cell_lower(j), hi_j = np.cell_upper(j);
      bool lo_ok = !lo_i || (lo_j && *lo_j >= *lo_i);
      bool hi_ok = !hi_i || (hi_j && *hi_j <= *hi_i);
      if (lo_ok && hi_ok) out.cell_map[i].push_back(j);
    }
  }
  return out;
}

}  // namespace isynt
