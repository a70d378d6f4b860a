#pragma once

#include <random>
#include <sstream>

#include "isynt/parser.hpp"

namespace isynt::testing {

// The elevator of the worked example: two locations folded into an integer
// variable, guards made an explicit exhaustive case split.
inline const char* elevator_source() {
  return R"(
// elevator: environment sets a target while the door is open, the
// controller then moves the cabin one floor per step
arena {
  var target : int = 0;
  var floor : int = 0;
  var loc : int = 0;
  env env_inc, door_open;
  con up, down;

  trans loc <= 0 & door_open & env_inc  -> target := target + 1;
  trans loc <= 0 & door_open & !env_inc -> target := target - 1;
  trans loc <= 0 & !door_open           -> loc := 1;
  trans !(loc <= 0) & door_open & floor = target -> loc := 0;
  trans !(loc <= 0) & !(door_open & floor = target) & up & !down -> floor := floor + 1;
  trans !(loc <= 0) & !(door_open & floor = target) & down & !up -> floor := floor - 1;
  trans !(loc <= 0) & !(door_open & floor = target) & ((up & down) | (!up & !down)) -> skip;
}
objective: (G F door_open & G F !door_open)
        -> (G F floor = target & G (door_open -> (up <-> down)));
)";
}

inline problem elevator() { return parse_problem(elevator_source()); }

// e -> x++, !e -> x--, objective G(x <= 0): the running counter example
inline const char* counter_source() {
  return R"(
arena {
  var x : int = 0;
  env e;
  con c;
  trans e  -> x := x + 1;
  trans !e -> x := x - 1;
}
objective: G (x <= 0);
)";
}
inline problem counter() { return parse_problem(counter_source()); }

inline std::mt19937& rng() {
  static std::mt19937 gen(20250810);
  return gen;
}
inline i64 rand_int(i64 lo, i64 hi) {
  return std::uniform_int_distribution<i64>(lo, hi)(rng());
}

}  // namespace isynt::testing
