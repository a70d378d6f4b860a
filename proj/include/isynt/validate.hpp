#pragma once

#include "isynt/arena.hpp"
#include "isynt/lia.hpp"

namespace isynt {

/// Well-formedness report for an arena: guard pairs that can fire together
/// and input/valuation classes no guard covers.
struct validation_report {
  struct mutex_violation {
    size_t first, second;   // transition indices
    boolset inputs, outputs;
    valuation witness;
  };
  struct totality_violation {
    boolset inputs, outputs;
    valuation witness;
  };
  std::vector<mutex_violation> overlaps;
  std::vector<totality_violation> gaps;
  bool ok() const { return overlaps.empty() && gaps.empty(); }
};

/// Checks determinism and totality of the guards for every boolean choice
/// and every integer valuation; exact via the lia solver.
validation_report validate_arena(const arena& a, lia_solver& solver);

/// Boolean-guard DNF support: specialise a guard under fixed booleans and
/// expand the remaining predicate structure into cubes (literal lists).
std::vector<std::vector<predicate>> predicate_cubes(const formula_ptr& g,
                                                    const boolset& inputs,
                                                    const boolset& outputs);

}  // namespace isynt
