#pragma once

#include "isynt/abstraction.hpp"
#include "isynt/machine.hpp"

namespace isynt {

/// Finite LTL synthesis input: a propositional formula with declared,
/// disjoint input and output propositions.
struct synthesis_problem {
  formula_ptr spec;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

struct bound_schedule {
  std::vector<int> bounds{1, 2, 3, 5, 8, 13};
};

struct backend_limits {
  long game_node_budget = 4000000;
  size_t nba_state_limit = 200000;
};

enum class verdict_kind { realisable, unrealisable, unknown };

struct synthesis_result {
  verdict_kind kind = verdict_kind::unknown;
  std::optional<strategy_machine> machine;  // mealy / moore witness
  std::string reason;                       // for unknown
  int used_bound = 0;
};

/// Deterministic safety monitor driving the game arena: tracks the word's
/// step validity (the abstraction plus step-invariant conjuncts). States
/// embed the previous letter. A null step means the letter broke the
/// monitor, which is decided by the input part alone.
class game_monitor {
 public:
  virtual ~game_monitor() = default;
  virtual uint32_t initial_state() const = 0;
  virtual std::optional<uint32_t> step(uint32_t st, letter l) const = 0;
  /// Candidate environment letter parts from st; a superset of the valid
  /// ones and disjoint from output bits. Exhaustive for completeness.
  virtual std::vector<letter> env_choices(uint32_t st) const = 0;
};

/// Monitor accepting every word (plain LTL synthesis).
class trivial_monitor final : public game_monitor {
 public:
  explicit trivial_monitor(letter input_mask);
  uint32_t initial_state() const override { return 0; }
  std::optional<uint32_t> step(uint32_t, letter) const override { return 0; }
  std::vector<letter> env_choices(uint32_t) const override { return choices_; }

 private:
  std::vector<letter> choices_;
};

/// The abstraction and its step-invariant conjuncts as a deterministic
/// monitor over the bit vocabulary.
class abs_monitor final : public game_monitor {
 public:
  /// initial/invariant/step formulas are over the lowered vocabulary;
  /// step conjuncts read the current letter plainly and the next letter
  /// under one X.
  abs_monitor(const abs_system& sys, const prop_table& props,
              std::vector<std::string> monitor_bits,
              std::vector<formula_ptr> initial_conj,
              std::vector<formula_ptr> invariant_conj,
              std::vector<formula_ptr> step_conj);

  uint32_t initial_state() const override { return 0; }
  std::optional<uint32_t> step(uint32_t st, letter l) const override;
  std::vector<letter> env_choices(uint32_t st) const override;

  /// Decode the abstraction content of a letter; nullopt on dead codes.
  struct decoded {
    std::vector<uint16_t> cells;
    step_bits step;
    uint16_t ec = 0;
    letter monitor = 0;
  };
  std::optional<decoded> decode(letter l) const;
  letter encode_cells(const std::vector<uint16_t>& cells) const;
  letter encode_step(const step_bits& sb) const;
  uint16_t ec_of_letter(letter l) const;

 private:
  struct mstate {
    int phase;  // 0 start, 1 after first letter, 2 steady
    letter prev = 0;
    uint32_t prev_cells = 0;
  };
  uint32_t intern(const mstate& s) const;
  bool position_ok(letter l, bool initial) const;
  bool pair_ok(letter prev, letter cur) const;

  const abs_system* sys_;
  const prop_table* props_;
  std::vector<std::vector<int>> cell_bits_;   // per term
  std::vector<std::array<int, 2>> delta_bits_;  // per group
  std::vector<int> satom_bits_;
  std::vector<int> monitor_bit_idx_;
  std::vector<int> bool_idx_;  // arena bool -> prop index
  letter env_free_mask_ = 0;   // env booleans
  letter monitor_mask_ = 0;
  std::vector<formula_ptr> initial_conj_, invariant_conj_, step_conj_;
  mutable std::vector<mstate> states_;
  mutable std::map<std::tuple<int, letter>, uint32_t> index_;
};

/// Structured game input used by the engine: (monitor & assumptions) -> goal.
struct game_problem {
  const game_monitor* monitor = nullptr;
  formula_ptr assumptions;  // liveness premises, tt when none
  formula_ptr goal;
  prop_table props;
  letter input_mask = 0, output_mask = 0;
};

/// Bounded-synthesis search: alternates a Mealy controller search and a
/// Moore counterstrategy search per bound in the schedule; the first
/// verified witness wins. Every returned machine is re-verified by an
/// explicit product model check before being reported.
synthesis_result solve_game(const game_problem& p, const bound_schedule& sched,
                            const backend_limits& lim = {});

/// Plain LTL synthesis entry point (trivial monitor).
synthesis_result solve(const synthesis_problem& p, const bound_schedule& sched,
                       const backend_limits& lim = {});

/// Model check a machine against the structured objective: a controller
/// must make (monitor & assumptions) -> goal hold on every trace, a
/// counterstrategy must force its negation. Returns true if the machine's
/// claim verifies.
bool verify_machine(const strategy_machine& m, const game_problem& p,
                    const backend_limits& lim = {});

}  // namespace isynt
