#include "doctest.h"
#include "isynt/lia.hpp"
#include "test_helpers.hpp"

using namespace isynt;
using namespace isynt::testing;

namespace {

lin_constraint leq(lin_term t, i64 b) { return {std::move(t), b}; }
lin_term v(const std::string& n, i64 c = 1) { return lin_term::var(n, c); }

bool brute_force_sat(const std::vector<lin_constraint>& cs, i64 lo, i64 hi) {
  std::vector<std::string> vars;
  {
    std::set<std::string> s;
    for (auto& c : cs)
      for (auto& [n, k] : c.term.coeffs()) s.insert(n);
    vars.assign(s.begin(), s.end());
  }
  std::vector<i64> point(vars.size(), lo);
  for (;;) {
    valuation val;
    for (size_t i = 0; i < vars.size(); ++i) val[vars[i]] = point[i];
    bool ok = true;
    for (auto& c : cs) {
      i64 x = c.term.eval(val);
      if (c.sense == constraint_sense::eq ? x != c.bound : x > c.bound) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
    size_t i = 0;
    while (i < point.size() && point[i] == hi) point[i++] = lo;
    if (i == point.size()) return false;
    ++point[i];
  }
}

}  // namespace

TEST_CASE("solve_conjunction basic verdicts") {
  lia_solver s;
  SUBCASE("x <= 0 and x >= 1") {
    auto r = s.solve({leq(v("x"), 0), leq(v("x", -1), -1)});
    REQUIRE(is_unsat(r));
    CHECK(check_certificate({leq(v("x"), 0), leq(v("x", -1), -1)},
                            std::get<lia_unsat>(r).cert));
  }
  SUBCASE("x + y <= 3, x >= 2, y >= 2") {
    std::vector<lin_constraint> cs{leq(v("x") + v("y"), 3), leq(v("x", -1), -2),
                                   leq(v("y", -1), -2)};
    auto r = s.solve(cs);
    REQUIRE(is_unsat(r));
    CHECK(check_certificate(cs, std::get<lia_unsat>(r).cert));
  }
  SUBCASE("parity: 2x = 1 is integer infeasible") {
    std::vector<lin_constraint> cs{leq(v("x", 2), 1), leq(v("x", -2), -1)};
    auto r = s.solve(cs);
    REQUIRE(is_unsat(r));
    CHECK(check_certificate(cs, std::get<lia_unsat>(r).cert));
  }
  SUBCASE("empty list is sat at the origin") {
    auto r = s.solve({});
    CHECK(is_sat(r));
  }
  SUBCASE("sat model replays") {
    std::vector<lin_constraint> cs{leq(v("x") - v("y"), -1),
                                   leq(v("y"), 4),
                                   leq(v("x", -1), -2)};
    auto r = s.solve(cs);
    REQUIRE(is_sat(r));
    auto& m = std::get<lia_sat>(r).model;
    for (auto& c : cs) CHECK(c.term.eval(m) <= c.bound);
  }
}

TEST_CASE("agreement with brute force on random small systems") {
  lia_solver s;
  int checked = 0;
  int unknowns = 0;
  for (int round = 0; round < 300; ++round) {
    std::vector<lin_constraint> cs;
    int n = static_cast<int>(rand_int(1, 4));
    const char* names[] = {"x", "y", "z"};
    for (int i = 0; i < n; ++i) {
      lin_term t;
      for (auto nm : names) t.set_coeff(nm, rand_int(-4, 4));
      lin_constraint c{t, rand_int(-4, 4),
                       rand_int(0, 4) == 0 ? constraint_sense::eq
                                           : constraint_sense::leq};
      cs.push_back(c);
    }
    auto r = s.solve(cs);
    bool box_model = brute_force_sat(cs, -20, 20);
    // whenever a model exists in the box, the solver must say sat
    if (box_model) REQUIRE(is_sat(r));
    if (is_unsat(r)) {
      CHECK(!box_model);
      CHECK(check_certificate(cs, std::get<lia_unsat>(r).cert));
    } else if (is_sat(r)) {
      auto& m = std::get<lia_sat>(r).model;
      for (auto& c : cs) {
        i64 x = c.term.eval(m);
        if (c.sense == constraint_sense::eq)
          CHECK(x == c.bound);
        else
          CHECK(x <= c.bound);
      }
    } else {
      // unknown is allowed only for integer-infeasible unbounded systems
      // that defeat depth-limited branch and bound
      CHECK(!box_model);
      ++unknowns;
    }
    ++checked;
  }
  CHECK(checked == 300);
  CHECK(unknowns <= 8);
}

TEST_CASE("sequence interpolants on the canonical chain") {
  lia_solver s;
  // f0 = (x0 = 0), f1 = (x1 = x0+1), f2 = (x2 = x1+1), f3 = (x2 <= 1)
  std::vector<std::vector<lin_constraint>> fs{
      {eq_constraint(v("x@0"), 0)},
      {eq_constraint(v("x@1") - v("x@0"), 1)},
      {eq_constraint(v("x@2") - v("x@1"), 1)},
      {leq(v("x@2"), 1)}};
  auto r = sequence_interpolants(fs, s);
  REQUIRE(std::holds_alternative<std::vector<std::vector<predicate>>>(r));
  auto is = std::get<std::vector<std::vector<predicate>>>(r);
  REQUIRE(is.size() == 3);
  // the three conditions are machine-checked inside; sanity-check shapes:
  // I_1 over x@0, I_2 over x@1, I_3 over x@2, and I_3 & f_3 unsat
  REQUIRE(is[2].size() == 1);
  auto q = is[2][0];
  std::vector<lin_constraint> final{constraint_of(q), leq(v("x@2"), 1)};
  CHECK(is_unsat(s.solve(final)));
  for (size_t i = 0; i < 3; ++i)
    for (auto& p : is[i]) {
      REQUIRE(p.term().coeffs().size() == 1);
      CHECK(p.term().coeffs().begin()->first ==
            "x@" + std::to_string(i));
    }
}

TEST_CASE("interpolants on random unsatisfiable step chains") {
  lia_solver s;
  int produced = 0;
  for (int round = 0; round < 60; ++round) {
    // x0 = a; k increments by 1..2; final demand x_k <= too small
    i64 a = rand_int(-3, 3);
    int k = static_cast<int>(rand_int(2, 5));
    std::vector<std::vector<lin_constraint>> fs;
    fs.push_back({eq_constraint(v(indexed_var("x", 0)), a)});
    i64 total = a;
    for (int i = 1; i < k; ++i) {
      i64 d = rand_int(1, 2);
      total += d;
      fs.push_back({eq_constraint(
          v(indexed_var("x", i)) - v(indexed_var("x", i - 1)), d)});
    }
    fs.push_back({leq(v(indexed_var("x", k - 1)), total - 1)});
    auto r = sequence_interpolants(fs, s);
    // conditions are verified inside sequence_interpolants; reaching a
    // result at all is the test
    REQUIRE(std::holds_alternative<std::vector<std::vector<predicate>>>(r));
    ++produced;
  }
  CHECK(produced == 60);
}

TEST_CASE("interpolation failure on purely integer conflicts") {
  lia_solver s;
  // 2x0 = x1, x1 = 2y+1 style parity clash is rationally feasible
  std::vector<std::vector<lin_constraint>> fs{
      {eq_constraint(v("x@0", 2) - v("s@0", 2), 1)},  // 2x0 - 2s0 = 1
      {leq(v("x@0") - v("x@0"), 0)}};
  auto r = sequence_interpolants(fs, s);
  REQUIRE(std::holds_alternative<interp_failure>(r));
  CHECK(std::get<interp_failure>(r).integer_only);
}

TEST_CASE("degenerate chain: f0 already unsatisfiable") {
  lia_solver s;
  std::vector<std::vector<lin_constraint>> fs{
      {leq(v("x@0"), 0), leq(v("x@0", -1), -1)}, {leq(v("x@1"), 5)}};
  auto r = sequence_interpolants(fs, s);
  REQUIRE(std::holds_alternative<std::vector<std::vector<predicate>>>(r));
  auto is = std::get<std::vector<std::vector<predicate>>>(r);
  REQUIRE(is.size() == 1);
  // I_1 is the false predicate; filtering constants leaves no usable
  // predicate, which degenerates to pruning via the exact initial state
  REQUIRE(is[0].size() == 1);
  CHECK(is[0][0].is_constant());
  CHECK(!is[0][0].constant_value());
}

TEST_CASE("ranking synthesis: elevator up loop") {
  lia_solver s;
  // while (floor < target) floor := floor + 1
  std::vector<lin_constraint> rel{
      eq_constraint(v("floor") - v(prev_var("floor")), 1),
      eq_constraint(v("target") - v(prev_var("target")), 0)};
  std::vector<lin_constraint> guard{
      leq(v(prev_var("floor")) - v(prev_var("target")), -1)};
  auto r = synth_linear_ranking(rel, guard, {}, s);
  REQUIRE(r.has_value());
  CHECK(verify_ranking(*r, rel, guard, s));
  // r must decrease along the loop: coefficient direction target - floor
  i64 cf = r->term.coeff("floor"), ct = r->term.coeff("target");
  CHECK(cf < 0);
  CHECK(cf + ct >= 0);  // bounded below under floor < target
}

TEST_CASE("ranking synthesis: bounded counter") {
  lia_solver s;
  // while (x <= 10) x := x + 1  ->  r = 10 - x works
  std::vector<lin_constraint> rel{
      eq_constraint(v("x") - v(prev_var("x")), 1)};
  std::vector<lin_constraint> guard{leq(v(prev_var("x")), 10)};
  auto r = synth_linear_ranking(rel, guard, {}, s);
  REQUIRE(r.has_value());
  CHECK(verify_ranking(*r, rel, guard, s));
  CHECK(r->term.coeff("x") < 0);
  // and the reference ranking 10 - x passes the checker
  ranking_function ref{lin_term::var("x", -1), {}, -10};
  CHECK(verify_ranking(ref, rel, guard, s));
}

TEST_CASE("ranking synthesis: stuttering loop has none") {
  lia_solver s;
  std::vector<lin_constraint> rel{
      eq_constraint(v("x") - v(prev_var("x")), 0)};
  auto r = synth_linear_ranking(rel, {}, {}, s);
  CHECK(!r.has_value());
}

TEST_CASE("verify_ranking rejects wrong candidates") {
  lia_solver s;
  std::vector<lin_constraint> rel{
      eq_constraint(v("floor") - v(prev_var("floor")), 1),
      eq_constraint(v("target") - v(prev_var("target")), 0)};
  std::vector<lin_constraint> guard{
      leq(v(prev_var("floor")) - v(prev_var("target")), -1)};
  // r = floor increases along the loop
  CHECK(!verify_ranking({lin_term::var("floor"), {}, 0}, rel, guard, s));
  // constant rankings never strictly decrease on an enabled transition;
  // a constant term has no variables so the synthesiser cannot emit one,
  // and a frozen variable fails the decrease check
  CHECK(!verify_ranking({lin_term::var("target"), {}, 0}, rel, guard, s));
}
