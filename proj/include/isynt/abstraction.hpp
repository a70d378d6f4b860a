#pragma once

#include <cstdint>

#include "isynt/arena.hpp"
#include "isynt/partition.hpp"
#include "isynt/validate.hpp"

namespace isynt {

/// Step-delta category of a term under one arena step, for transition
/// predicates t_inc/t_dec with eps = 1: both false means the term kept
/// its value.
enum class step_delta : uint8_t { none = 0, inc = 1, dec = 2 };

/// Per-term inc/dec transition-predicate pair, encoded as a one-hot group
/// over (none, inc, dec) in two bits (11 is dead).
struct incdec_group {
  lin_term term;  // canonical positive-leading form
  predicate inc_pred() const {  // t_prev <= t - 1
    return predicate(term.rename(prev_var) - term, -1);
  }
  predicate dec_pred() const {  // t <= t_prev - 1
    return predicate(term - term.rename(prev_var), -1);
  }
};

/// Named opaque transition-predicate conjunction (loop-step and stutter
/// predicates from structural refinement). One boolean bit each.
struct step_atom {
  std::string name;
  std::vector<predicate> literals;  // conjunction over V and V_prev
};

/// Values of all transition-predicate bits at one word position.
struct step_bits {
  std::vector<step_delta> deltas;  // one per incdec group
  std::vector<bool> atoms;         // one per step atom

  bool operator==(const step_bits& o) const {
    return deltas == o.deltas && atoms == o.atoms;
  }
  auto operator<=>(const step_bits& o) const = default;
};

/// The predicate-abstraction domain: term partitions plus the registered
/// transition predicates.
struct abs_domain {
  partition_map parts;
  std::vector<lin_term> terms;  // sorted partition keys (cells tuple order)
  std::vector<incdec_group> groups;
  std::vector<step_atom> satoms;

  const term_partition& part(size_t i) const { return parts.at(terms[i]); }
  /// Exact cell tuple of a valuation.
  std::vector<uint16_t> cells_at(const valuation& v) const;
  /// Exact step bits of a concrete step.
  step_bits step_at(const valuation& prev, const valuation& cur) const;
  step_bits initial_step() const {  // no predecessor: everything false
    return {std::vector<step_delta>(groups.size(), step_delta::none),
            std::vector<bool>(satoms.size(), false)};
  }
  int incdec_index(const lin_term& t) const {
    for (size_t i = 0; i < groups.size(); ++i)
      if (groups[i].term == t) return static_cast<int>(i);
    return -1;
  }
};

/// Memo of satisfiability queries keyed by semantic content, so refinement
/// re-queries only what partition extension actually split.
using query_cache = std::map<std::string, bool>;

struct abs_stats {
  // per (transition, term) count of cell-pair queries (cache misses only)
  std::map<std::pair<size_t, size_t>, long> term_queries;
  long joint_queries = 0;
  long max_term_queries_per_transition() const {
    long m = 0;
    for (auto& [k, v] : term_queries) m = std::max(m, v);
    return m;
  }
};

/// The abstraction of an arena over the domain: exact initial state and
/// initial transition function, plus the reachability-reduced abstract
/// transition relation. Extra LTL conjuncts (acceleration, refinements)
/// ride along and are emitted with the formula.
struct abs_system {
  abs_domain dom;
  const arena* a = nullptr;

  std::vector<std::string> bools;  // env then con, fixed order
  size_t env_count = 0;
  uint16_t bool_mask(const boolset& in, const boolset& out) const;
  std::pair<boolset, boolset> split_mask(uint16_t ec) const;

  // interned cell tuples
  std::vector<std::vector<uint16_t>> cells_pool;
  std::map<std::vector<uint16_t>, uint32_t> cells_index;
  uint32_t intern(const std::vector<uint16_t>& c);

  struct succ {
    uint32_t cells;
    step_bits step;
    auto operator<=>(const succ& o) const = default;
  };

  uint32_t init_cells = 0;
  std::map<uint16_t, succ> init_delta;                      // exact, per E u C
  std::map<std::pair<uint32_t, uint16_t>, std::vector<succ>> delta;
  std::vector<formula_ptr> extra;  // psi conjuncts over semantic atoms

  bool same_graph(const abs_system& o) const;
};

/// Forward-reachable abstraction construction. Every emitted transition is
/// validated by a joint satisfiability query; per-term successor
/// computation stays within (cells_t)^2 queries per (transition, term).
abs_system build_abstraction(const arena& a, const abs_domain& dom,
                             lia_solver& solver, query_cache& cache,
                             abs_stats& stats);

/// Extends the partitions with the new predicates and rebuilds through the
/// query cache; split cells are the only re-queried part. The result equals
/// a from-scratch build on the enlarged predicate set.
abs_system refine_abstraction(const abs_system& sys,
                              const std::vector<predicate>& new_preds,
                              lia_solver& solver, query_cache& cache,
                              abs_stats& stats);

/// Naming scheme for the boolean vocabulary of the abstraction.
struct bit_names {
  static std::string cell_bit(size_t term_idx, int bit) {
    return "p" + std::to_string(term_idx) + "b" + std::to_string(bit);
  }
  static std::string delta_bit(size_t group_idx, int bit) {
    return "d" + std::to_string(group_idx) + "b" + std::to_string(bit);
  }
};

/// The abstraction as an LTL formula over E' u C u cell bits: initial cube,
/// exact initial-transition disjunct, G over the transition cubes, dead-code
/// exclusions for unused bit patterns, and the extra psi conjuncts. Cell and
/// delta bits are environment inputs.
formula_ptr emit_ltl(const abs_system& sys);

/// Formula over cell bits equivalent to a state predicate, and cubes for
/// cells and step values (shared by emit_ltl and the backend lowering).
formula_ptr lower_predicate(const abs_system& sys, const predicate& p);
formula_ptr cells_cube(const abs_system& sys, uint32_t cells);
formula_ptr step_cube(const abs_system& sys, const step_bits& sb);

}  // namespace isynt
