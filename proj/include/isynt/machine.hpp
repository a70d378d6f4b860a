#pragma once

#include "isynt/nba.hpp"

namespace isynt {

/// Mealy controller or Moore counterstrategy over a boolean alphabet split
/// into inputs and outputs. Transitions are stored per explicit input
/// letter, with an optional catch-all keeping the function complete over
/// the full input alphabet (only used by Mealy machines, whose inputs
/// include abstraction bits).
struct strategy_machine {
  enum class kind_t { mealy, moore };

  struct edge {
    letter input;    // over input props
    letter output;   // over output props (mealy; moore keeps state output)
    uint32_t next;
  };
  struct state {
    letter output = 0;  // moore output
    std::vector<edge> edges;
    std::optional<edge> otherwise;  // input field ignored
  };

  kind_t kind = kind_t::mealy;
  prop_table props;
  letter input_mask = 0, output_mask = 0;
  std::vector<state> states;
  uint32_t initial = 0;

  size_t size() const { return states.size(); }

  /// Transition lookup; throws if the machine is incomplete at (s, in).
  const edge& at(uint32_t s, letter in) const {
    for (auto& e : states[s].edges)
      if (e.input == (in & input_mask)) return e;
    if (states[s].otherwise) return *states[s].otherwise;
    throw std::logic_error("incomplete strategy machine");
  }
  /// Full letter produced when reading in at state s.
  letter emit(uint32_t s, letter in) const {
    const edge& e = at(s, in);
    letter out = kind == kind_t::moore ? states[s].output : e.output;
    return (in & input_mask) | (out & output_mask);
  }

  /// Deterministic and complete per the machine definitions: every state
  /// resolves every input letter exactly once.
  bool complete() const;

  /// Merge bisimilar states (keeps behaviour, shrinks the table).
  void reduce();
};

std::string export_dot(const strategy_machine& m);
std::string export_json(const strategy_machine& m);
strategy_machine import_json(const std::string& text);

}  // namespace isynt
