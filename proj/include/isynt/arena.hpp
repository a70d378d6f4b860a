#pragma once

#include <set>
#include <vector>

#include "isynt/ltl.hpp"

namespace isynt {

using boolset = std::set<std::string>;

/// One guarded update row. The guard is a boolean combination of env/con
/// variables and state predicate atoms; the update is total by convention,
/// unmentioned variables keep their value.
struct guarded_update {
  formula_ptr guard;
  std::map<std::string, lin_term> update;
};

/// Deterministic infinite-state arena <V, val0, delta>: for every valuation
/// and every choice of env/con booleans exactly one guard is enabled.
struct arena {
  std::vector<std::pair<std::string, i64>> vars;  // declaration order
  std::vector<std::string> env_bools;
  std::vector<std::string> con_bools;
  std::vector<guarded_update> transitions;

  valuation initial() const {
    valuation v;
    for (auto& [n, x] : vars) v[n] = x;
    return v;
  }
  bool is_var(const std::string& n) const {
    for (auto& [m, x] : vars)
      if (m == n) return true;
    return false;
  }
  /// State predicate atoms appearing in guards.
  std::vector<predicate> guard_predicates() const;
  /// Effect of a transition on term t: t after update minus t before,
  /// as a term over the pre-state variables.
  lin_term delta_of(const guarded_update& g, const lin_term& t) const;
};

/// Step in a concrete word: valuation plus the boolean choices made there.
struct concrete_word_step {
  valuation val;
  boolset inputs;
  boolset outputs;
};

/// Truth of a guard under a valuation and boolean choices.
bool eval_guard(const formula_ptr& g, const valuation& val,
                const boolset& inputs, const boolset& outputs);

/// Index of the unique enabled transition; throws if none or several are
/// enabled (the arena failed or skipped validation).
size_t enabled_transition(const arena& a, const valuation& val,
                          const boolset& inputs, const boolset& outputs);

/// delta(f)(val) for the unique enabled guard f.
valuation step(const arena& a, const valuation& val, const boolset& inputs,
               const boolset& outputs);

}  // namespace isynt
