#pragma once

#include <stdexcept>

#include "isynt/arena.hpp"

namespace isynt {

struct parse_error : std::runtime_error {
  int line, col;
  parse_error(int l, int c, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(l) + ":" +
                           std::to_string(c) + ": " + msg),
        line(l),
        col(c) {}
};

struct problem {
  arena a;
  formula_ptr objective;
};

/// Parse a synthesis problem. All comparison atoms are normalised to
/// canonical <= form with integer tightening (x < y becomes x - y <= -1).
problem parse_problem(const std::string& text);

/// Parse a standalone LTL formula over the given arena's vocabulary.
formula_ptr parse_ltl(const std::string& text, const arena& a);

std::string print_problem(const problem& p);

}  // namespace isynt
