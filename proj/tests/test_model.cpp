#include "doctest.h"
#include "isynt/parser.hpp"
#include "isynt/partition.hpp"
#include "isynt/validate.hpp"
#include "test_helpers.hpp"

using namespace isynt;
using namespace isynt::testing;

TEST_CASE("parse the elevator problem") {
  auto p = elevator();
  CHECK(p.a.vars.size() == 3);  // target, floor and the location variable
  CHECK(p.a.vars[0].first == "target");
  CHECK(p.a.env_bools == std::vector<std::string>{"env_inc", "door_open"});
  CHECK(p.a.con_bools == std::vector<std::string>{"up", "down"});
  CHECK(p.a.transitions.size() == 7);
  // objective is (A1 & A2) -> (G1 & G2)
  CHECK(p.objective->op == ltl_op::implies);
  auto preds = collect_predicates(p.objective);
  CHECK(preds.size() == 2);  // floor - target <= 0 and its counterpart
}

TEST_CASE("identity update arena and atom canonicalisation") {
  auto p = parse_problem(
      "arena { var x : int = 0; env e; con c; trans true -> x := x; }\n"
      "objective: G (x <= 0);");
  CHECK(p.a.transitions.size() == 1);
  auto preds = collect_predicates(p.objective);
  REQUIRE(preds.size() == 1);
  CHECK(preds[0] == predicate(lin_term::var("x"), 0));
}

TEST_CASE("strict comparison is tightened over the integers") {
  // target <= floor appears as the negation of floor - target <= -1
  auto p = parse_problem(
      "arena { var target : int = 0; var floor : int = 0; env e; con c;\n"
      " trans true -> skip; }\n"
      "objective: G (target <= floor);");
  auto f = p.objective->kids[0];
  REQUIRE(f->op == ltl_op::pred);
  predicate q = *f->pred;
  // canonical form: term with positive leading coefficient is floor-target;
  // target - floor <= 0 == !(floor - target <= -1)
  lin_term fmt = lin_term::var("floor") - lin_term::var("target");
  CHECK(key_of(q).key == fmt);
  valuation v{{"floor", 0}, {"target", 0}};
  CHECK(eval_predicate(q, nullptr, v));
  v["target"] = 1;
  CHECK(!eval_predicate(q, nullptr, v));
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_problem("arena { var x : int = 0.5; }"), parse_error);
  CHECK_THROWS_WITH_AS(
      parse_problem("arena { var x : int = 0; env e; con c;\n"
                    "trans y <= 0 -> skip; } objective: true;"),
      doctest::Contains("unknown variable y"), parse_error);
  CHECK_THROWS_WITH_AS(
      parse_problem("arena { var x : int = 0; env e; con c;\n"
                    "trans x * x <= 0 -> skip; } objective: true;"),
      doctest::Contains("non-linear"), parse_error);
}

TEST_CASE("step follows the unique enabled guard") {
  auto p = elevator();
  valuation v = p.a.initial();
  SUBCASE("up transition increments the floor at the cabin location") {
    v["loc"] = 1;
    v["target"] = 3;
    auto next = step(p.a, v, {}, {"up"});
    CHECK(next["floor"] == 1);
    CHECK(next["target"] == 3);
  }
  SUBCASE("stutter keeps the floor") {
    v["loc"] = 1;
    v["target"] = 3;
    auto next = step(p.a, v, {}, {"up", "down"});
    CHECK(next["floor"] == 0);
    auto next2 = step(p.a, v, {}, {});
    CHECK(next2["floor"] == 0);
  }
  SUBCASE("identity arena never changes the valuation") {
    auto q = parse_problem(
        "arena { var x : int = 7; env e; con c; trans true -> x := x; }\n"
        "objective: G (x <= 7);");
    valuation w = q.a.initial();
    for (auto in : {boolset{}, boolset{"e"}})
      for (auto out : {boolset{}, boolset{"c"}})
        CHECK(step(q.a, w, in, out) == w);
  }
}

TEST_CASE("eval_predicate: valuation pairs and the missing-prev convention") {
  valuation cur{{"floor", 0}, {"target", 0}};
  predicate eq(lin_term::var("floor") - lin_term::var("target"), 0);
  CHECK(eval_predicate(eq, nullptr, cur));

  // floor_prev <= floor - 1 after an increment
  predicate inc(lin_term::var(prev_var("floor")) - lin_term::var("floor"), -1);
  valuation prev{{"floor", 0}, {"target", 1}};
  valuation now{{"floor", 1}, {"target", 1}};
  CHECK(eval_predicate(inc, &prev, now));
  CHECK(inc.kind() == pred_kind::transition);
  CHECK(!eval_predicate(inc, nullptr, now));
}

TEST_CASE("validate_arena accepts the elevator") {
  lia_solver s;
  auto p = elevator();
  auto rep = validate_arena(p.a, s);
  CHECK(rep.ok());
}

TEST_CASE("validate_arena: complementary boolean guards are fine") {
  lia_solver s;
  auto p = counter();
  CHECK(validate_arena(p.a, s).ok());
}

TEST_CASE("validate_arena flags overlap and gaps") {
  auto p = parse_problem(
      "arena { var x : int = 0; env e; con c;\n"
      " trans x <= 0 -> x := x; trans x <= 5 -> x := x + 1; }\n"
      "objective: true;");
  lia_solver s;
  auto rep = validate_arena(p.a, s);
  CHECK(!rep.ok());
  REQUIRE(!rep.overlaps.empty());
  // witnessed at any x <= 0
  CHECK(rep.overlaps[0].witness.at("x") <= 0);
  // brute force confirms the overlap on [-2,2]
  int overlap_points = 0;
  for (i64 x = -2; x <= 2; ++x)
    if (x <= 0 && x <= 5) ++overlap_points;
  CHECK(overlap_points > 0);
  // and x > 5 is covered by no guard
  CHECK(!rep.gaps.empty());
  CHECK(rep.gaps[0].witness.at("x") > 5);
}

TEST_CASE("round trip: print then parse is the identity") {
  auto check_roundtrip = [](const problem& p) {
    std::string text = print_problem(p);
    problem q = parse_problem(text);
    REQUIRE(q.a.vars == p.a.vars);
    REQUIRE(q.a.env_bools == p.a.env_bools);
    REQUIRE(q.a.con_bools == p.a.con_bools);
    REQUIRE(q.a.transitions.size() == p.a.transitions.size());
    for (size_t i = 0; i < q.a.transitions.size(); ++i) {
      CHECK(equal(q.a.transitions[i].guard, p.a.transitions[i].guard));
      CHECK(q.a.transitions[i].update == p.a.transitions[i].update);
    }
    CHECK(equal(q.objective, p.objective));
  };
  check_roundtrip(elevator());
  check_roundtrip(counter());

  // randomized arenas and formulas
  for (int round = 0; round < 50; ++round) {
    problem p;
    p.a.vars = {{"x", rand_int(-5, 5)}, {"y", rand_int(-5, 5)}};
    p.a.env_bools = {"e"};
    p.a.con_bools = {"c"};
    auto rand_term = [&] {
      lin_term t(rand_int(-3, 3));
      t.set_coeff("x", rand_int(-2, 2));
      t.set_coeff("y", rand_int(-2, 2));
      return t;
    };
    auto rand_guard_atom = [&]() -> formula_ptr {
      switch (rand_int(0, 2)) {
        case 0:
          return f_prop("e");
        case 1:
          return f_prop("c");
        default:
          return f_pred(predicate(rand_term(), rand_int(-4, 4)));
      }
    };
    guarded_update t1{rand_guard_atom(), {{"x", rand_term()}}};
    guarded_update t2{f_not(t1.guard), {}};
    p.a.transitions = {t1, t2};
    std::function<formula_ptr(int)> rand_ltl = [&](int depth) -> formula_ptr {
      if (depth == 0) return rand_guard_atom();
      switch (rand_int(0, 6)) {
        case 0:
          return f_and(rand_ltl(depth - 1), rand_ltl(depth - 1));
        case 1:
          return f_or(rand_ltl(depth - 1), rand_ltl(depth - 1));
        case 2:
          return f_not(rand_ltl(depth - 1));
        case 3:
          return f_next(rand_ltl(depth - 1));
        case 4:
          return f_until(rand_ltl(depth - 1), rand_ltl(depth - 1));
        case 5:
          return f_globally(rand_ltl(depth - 1));
        default:
          return f_eventually(rand_ltl(depth - 1));
      }
    };
    p.objective = rand_ltl(3);
    check_roundtrip(p);
  }
}

TEST_CASE("normalisation agrees with source truth on random points") {
  // every comparison operator against direct evaluation
  const char* ops[] = {"<=", "<", ">=", ">", "=", "!="};
  for (auto op : ops) {
    std::ostringstream src;
    src << "arena { var x : int = 0; var y : int = 0; env e; con c;\n"
        << " trans true -> skip; }\n"
        << "objective: G (2*x - y " << op << " y + 1);";
    auto p = parse_problem(src.str());
    auto f = p.objective->kids[0];
    for (int i = 0; i < 200; ++i) {
      valuation v{{"x", rand_int(-10, 10)}, {"y", rand_int(-10, 10)}};
      i64 lhs = 2 * v["x"] - v["y"], rhs = v["y"] + 1;
      bool expect;
      std::string o(op);
      if (o == "<=") expect = lhs <= rhs;
      else if (o == "<") expect = lhs < rhs;
      else if (o == ">=") expect = lhs >= rhs;
      else if (o == ">") expect = lhs > rhs;
      else if (o == "=") expect = lhs == rhs;
      else expect = lhs != rhs;
      CHECK(eval_guard(f, v, {}, {}) == expect);
    }
  }
}
