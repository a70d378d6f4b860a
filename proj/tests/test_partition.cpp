#include "doctest.h"
#include "isynt/partition.hpp"
#include "test_helpers.hpp"

using namespace isynt;
using namespace isynt::testing;

namespace {
lin_term fmt() { return lin_term::var("floor") - lin_term::var("target"); }
}

TEST_CASE("elevator partition from the worked example") {
  // {floor-target <= 0, !(floor-target <= -1), floor-target <= 1}
  std::vector<predicate> preds{
      predicate(fmt(), 0),
      predicate(fmt(), -1, polarity::not_leq),
      predicate(fmt(), 1),
  };
  auto parts = build_partitions(preds);
  REQUIRE(parts.size() == 1);
  auto& tp = parts.begin()->second;
  CHECK(tp.cuts() == std::vector<i64>{-1, 0, 1});
  CHECK(tp.cell_count() == 4);  // (-inf,-1], (-1,0], (0,1], (1,inf)
  CHECK(tp.bit_width() == 2);
  CHECK(tp.is_left_border(0));
  CHECK(tp.is_right_border(3));

  SUBCASE("pred_to_cells on the example atoms") {
    CHECK(pred_to_cells(predicate(fmt(), 0), tp) ==
          std::vector<size_t>{0, 1});
    CHECK(pred_to_cells(predicate(fmt(), 1, polarity::not_leq), tp) ==
          std::vector<size_t>{3});
    CHECK(pred_to_cells(predicate(fmt(), 1), tp) ==
          std::vector<size_t>{0, 1, 2});
    // point checks at floor-target in {-2,-1,0,1,2}
    for (i64 x : {-2, -1, 0, 1, 2}) {
      bool in_cells = false;
      for (auto c : pred_to_cells(predicate(fmt(), 1), tp))
        in_cells |= tp.cell_of_value(x) == c;
      CHECK(in_cells == (x <= 1));
    }
  }
}

TEST_CASE("empty and single-predicate partitions") {
  auto empty = build_partitions({});
  CHECK(empty.empty());  // no term, conceptually one all-of-Z cell each

  term_partition trivial(lin_term::var("t"), {});
  CHECK(trivial.cell_count() == 1);
  CHECK(trivial.bit_width() == 0);
  CHECK(trivial.is_left_border(0));
  CHECK(trivial.is_right_border(0));

  auto one = build_partitions({predicate(lin_term::var("x"), 5)});
  auto& tp = one.begin()->second;
  CHECK(tp.cell_count() == 2);
  CHECK(tp.bit_width() == 1);
  // brute-force cell membership for x in [0,10]
  for (i64 x = 0; x <= 10; ++x)
    CHECK(tp.cell_of_value(x) == (x <= 5 ? 0u : 1u));
}

TEST_CASE("negated-term predicates merge into the positive key") {
  // -x <= 3 (x >= -3) and x <= 5 share the term x
  auto parts = build_partitions({predicate(lin_term::var("x", -1), 3),
                                 predicate(lin_term::var("x"), 5)});
  REQUIRE(parts.size() == 1);
  auto& tp = parts.begin()->second;
  CHECK(tp.term() == lin_term::var("x"));
  CHECK(tp.cuts() == std::vector<i64>{-4, 5});
  // -x <= 3 holds iff x >= -3 iff not in the left cell
  auto cells = pred_to_cells(predicate(lin_term::var("x", -1), 3), tp);
  CHECK(cells == std::vector<size_t>{1, 2});
}

TEST_CASE("cell_constraints denote exactly the cell") {
  term_partition tp(lin_term::var("t"), {-1, 0});
  lia_solver s;
  SUBCASE("(-1,0] admits exactly t = 0") {
    auto cs = tp.cell_constraints(1);
    auto r = s.solve(cs);
    REQUIRE(is_sat(r));
    CHECK(std::get<lia_sat>(r).model.at("t") == 0);
    cs.push_back({lin_term::var("t"), -1});  // also t <= -1
    CHECK(is_unsat(s.solve(cs)));
    cs.pop_back();
    cs.push_back({lin_term::var("t", -1), -1});  // also t >= 1
    CHECK(is_unsat(s.solve(cs)));
  }
  SUBCASE("borders") {
    term_partition single(lin_term::var("t"), {0});
    auto left = single.cell_constraints(0);
    REQUIRE(left.size() == 1);
    CHECK(left[0].term == lin_term::var("t"));
    CHECK(left[0].bound == 0);
    auto right = single.cell_constraints(1);
    REQUIRE(right.size() == 1);
    CHECK(right[0].term == lin_term::var("t", -1));
    CHECK(right[0].bound == -1);
    CHECK_THROWS_AS(single.cell_constraints(2), std::out_of_range);
  }
}

TEST_CASE("extend_partition") {
  term_partition tp(lin_term::var("t"), {0});
  SUBCASE("insert below") {
    auto ext = extend_partition(tp, -1);
    CHECK(ext.partition.cuts() == std::vector<i64>{-1, 0});
    CHECK(ext.cell_map[0] == std::vector<size_t>{0, 1});
    CHECK(ext.cell_map[1] == std::vector<size_t>{2});
  }
  SUBCASE("duplicate bound is idempotent") {
    term_partition ele(fmt(), {-1, 0, 1});
    auto ext = extend_partition(ele, 1);
    CHECK(ext.partition == ele);
    for (size_t i = 0; i < 4; ++i)
      CHECK(ext.cell_map[i] == std::vector<size_t>{i});
  }
  SUBCASE("split the right border") {
    auto ext = extend_partition(tp, 5);
    CHECK(ext.cell_map[0] == std::vector<size_t>{0});
    CHECK(ext.cell_map[1] == std::vector<size_t>{1, 2});
    // point checks: old right cell (0,inf) covers (0,5] and (5,inf)
    for (i64 x = 1; x <= 8; ++x) {
      size_t nc = ext.partition.cell_of_value(x);
      CHECK((nc == 1 || nc == 2));
      CHECK(nc == (x <= 5 ? 1u : 2u));
    }
  }
}

TEST_CASE("random partitions: disjoint, covering, bit accounting") {
  lia_solver s;
  for (int round = 0; round < 40; ++round) {
    int npreds = static_cast<int>(rand_int(1, 6));
    std::vector<predicate> preds;
    lin_term t = lin_term::var("u") - lin_term::var("w", 2);
    for (int i = 0; i < npreds; ++i) {
      auto p = predicate(rand_int(0, 1) ? t : -t, rand_int(-6, 6),
                         rand_int(0, 1) ? polarity::leq : polarity::not_leq);
      preds.push_back(p);
    }
    auto parts = build_partitions(preds);
    REQUIRE(parts.size() == 1);
    auto& tp = parts.begin()->second;
    size_t n = tp.cell_count();
    size_t w = tp.bit_width();
    CHECK((size_t{1} << w) >= n);
    bool tight = w == 0 ? n == 1 : (size_t{1} << (w - 1)) < n;
    CHECK(tight);

    // pairwise unsat
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) {
        auto cs = tp.cell_constraints(i);
        auto cj = tp.cell_constraints(j);
        cs.insert(cs.end(), cj.begin(), cj.end());
        CHECK(is_unsat(s.solve(cs)));
      }

    // coverage and equivalence on random points
    for (int k = 0; k < 200; ++k) {
      i64 x = rand_int(-40, 40);
      size_t cell = tp.cell_of_value(x);
      int containing = 0;
      for (size_t i = 0; i < n; ++i) {
        auto lo = tp.cell_lower(i);
        auto hi = tp.cell_upper(i);
        bool in = (!lo || x > *lo) && (!hi || x <= *hi);
        if (in) ++containing;
        if (in) CHECK(i == cell);
      }
      CHECK(containing == 1);
      for (auto& p : preds) {
        bool member = false;
        for (auto c : pred_to_cells(p, tp)) member |= c == cell;
        // truth of p at the point t = x
        i64 keyval = x;
        auto kp = key_of(p.atom());
        bool atom_true = kp.negated_key ? !(keyval <= kp.cut) : keyval <= kp.cut;
        bool truth = p.is_negated() ? !atom_true : atom_true;
        CHECK(member == truth);
      }
    }
  }
}
