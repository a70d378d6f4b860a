#include "doctest.h"
#include "isynt/abstraction.hpp"
#include "isynt/parser.hpp"
#include "test_helpers.hpp"

using namespace isynt;
using namespace isynt::testing;

namespace {

abs_domain domain_for(const arena& a, const std::vector<predicate>& ps) {
  abs_domain d;
  d.parts = build_partitions(ps);
  for (auto& [t, tp] : d.parts) d.terms.push_back(t);
  return d;
}

// brute-force oracle: concrete successor cells from all valuations of the
// given box, under a fixed boolean choice
std::set<uint16_t> concrete_successors(const arena& a, const abs_domain& dom,
                                       size_t term_idx, uint16_t src_cell,
                                       const boolset& in, const boolset& out,
                                       i64 lo, i64 hi) {
  std::set<uint16_t> result;
  std::vector<std::string> vars;
  for (auto& [n, v] : a.vars) vars.push_back(n);
  std::vector<i64> point(vars.size(), lo);
  for (;;) {
    valuation v;
    for (size_t i = 0; i < vars.size(); ++i) v[vars[i]] = point[i];
    if (dom.cells_at(v)[term_idx] == src_cell) {
      valuation nxt = step(a, v, in, out);
      result.insert(dom.cells_at(nxt)[term_idx]);
    }
    size_t i = 0;
    while (i < point.size() && point[i] == hi) point[i++] = lo;
    if (i == point.size()) break;
    ++point[i];
  }
  return result;
}

}  // namespace

TEST_CASE("counter arena abstraction matches brute force") {
  auto p = counter();
  auto dom = domain_for(p.a, {predicate(lin_term::var("x"), 0)});
  lia_solver s;
  query_cache cache;
  abs_stats stats;
  auto sys = build_abstraction(p.a, dom, s, cache, stats);

  // cells: 0 = (x<=0), 1 = (x>0)
  REQUIRE(sys.dom.terms.size() == 1);
  uint16_t ec_e = sys.bool_mask({"e"}, {});
  uint16_t ec_not_e = sys.bool_mask({}, {});

  auto succs_of = [&](uint16_t src_cell, uint16_t ec) {
    std::set<uint16_t> out;
    uint32_t id = sys.cells_index.at({src_cell});
    auto it = sys.delta.find({id, ec});
    if (it == sys.delta.end()) return out;
    for (auto& su : it->second) out.insert(sys.cells_pool[su.cells][0]);
    return out;
  };

  // from x<=0 under e: successors {x<=0, x>0}; under !e only {x<=0}
  CHECK(succs_of(0, ec_e) == std::set<uint16_t>{0, 1});
  CHECK(succs_of(0, ec_not_e) == std::set<uint16_t>{0});
  // from x>0 under e only {x>0}; under !e both
  CHECK(succs_of(1, ec_e) == std::set<uint16_t>{1});
  CHECK(succs_of(1, ec_not_e) == std::set<uint16_t>{0, 1});

  // initial transition is exact: e leads past zero, !e stays below
  CHECK(sys.cells_pool[sys.init_delta.at(ec_e).cells][0] == 1);
  CHECK(sys.cells_pool[sys.init_delta.at(ec_not_e).cells][0] == 0);

  // agreement with exhaustive simulation over [-3,3]
  for (uint16_t src : {0, 1})
    for (auto& [in, ec] :
         std::vector<std::pair<boolset, uint16_t>>{{{"e"}, ec_e},
                                                   {{}, ec_not_e}}) {
      for (auto c : {boolset{}, boolset{"c"}}) {
        auto brute =
            concrete_successors(p.a, sys.dom, 0, src, in, c, -3, 3);
        auto abst = succs_of(src, sys.bool_mask(in, c));
        // abstraction over-approximates and here is exact
        for (auto b : brute) CHECK(abst.count(b));
        CHECK(abst == brute);
      }
    }
}

TEST_CASE("skip arena yields a single self loop") {
  auto p = parse_problem(
      "arena { var x : int = 0; env e; con c; trans true -> skip; }\n"
      "objective: G (x <= 0);");
  auto dom = domain_for(p.a, {predicate(lin_term::var("x"), 0)});
  lia_solver s;
  query_cache cache;
  abs_stats stats;
  auto sys = build_abstraction(p.a, dom, s, cache, stats);
  CHECK(sys.cells_pool[sys.init_cells][0] == 0);
  for (auto& [key, succs] : sys.delta) {
    CHECK(key.first == sys.init_cells);
    REQUIRE(succs.size() == 1);
    CHECK(succs[0].cells == sys.init_cells);
  }
  // only the x<=0 cell is ever reachable
  CHECK(sys.cells_pool.size() == 1);
}

TEST_CASE("elevator successor split at the target floor") {
  auto p = elevator();
  // predicates of the objective plus the location guard atom
  std::vector<predicate> ps = collect_predicates(p.objective);
  for (auto& q : p.a.guard_predicates()) ps.push_back(q);
  auto dom = domain_for(p.a, ps);
  lia_solver s;
  query_cache cache;
  abs_stats stats;
  auto sys = build_abstraction(p.a, dom, s, cache, stats);

  // find the term indices
  lin_term fmt = lin_term::var("floor") - lin_term::var("target");
  size_t fmt_i = 0, loc_i = 0;
  for (size_t i = 0; i < sys.dom.terms.size(); ++i) {
    if (sys.dom.terms[i] == fmt) fmt_i = i;
    if (sys.dom.terms[i] == lin_term::var("loc")) loc_i = i;
  }
  const auto& ftp = sys.dom.part(fmt_i);
  // cells of floor-target: (-inf,-1], (-1,0], (0,inf)
  REQUIRE(ftp.cell_count() == 3);

  // abstract state: loc = 1 (cabin), floor < target
  std::vector<uint16_t> cells(sys.dom.terms.size(), 0);
  cells[loc_i] = 1;
  cells[fmt_i] = 0;
  uint32_t src = sys.cells_index.at(cells);
  uint16_t ec = sys.bool_mask({}, {"up"});
  auto it = sys.delta.find({src, ec});
  REQUIRE(it != sys.delta.end());
  std::set<uint16_t> fmt_succs;
  for (auto& su : it->second) {
    CHECK(sys.cells_pool[su.cells][loc_i] == 1);  // stays at the cabin
    fmt_succs.insert(sys.cells_pool[su.cells][fmt_i]);
  }
  // floor++ from floor<target reaches floor=target or stays below
  CHECK(fmt_succs == std::set<uint16_t>{0, 1});
}

TEST_CASE("query budget: at most (|P_t|+1)^2 per transition and term") {
  // one term with three predicates -> 4 cells, 16 cell pairs
  auto p = counter();
  auto dom = domain_for(p.a, {predicate(lin_term::var("x"), 0),
                              predicate(lin_term::var("x"), 2),
                              predicate(lin_term::var("x"), 5)});
  lia_solver s;
  query_cache cache;
  abs_stats stats;
  auto sys = build_abstraction(p.a, dom, s, cache, stats);
  CHECK(sys.dom.part(0).cell_count() == 4);
  for (auto& [k, v] : stats.term_queries) CHECK(v <= 16);
  CHECK(stats.max_term_queries_per_transition() <= 16);
  CHECK(stats.max_term_queries_per_transition() > 0);
}

TEST_CASE("refinement equals a from-scratch build") {
  auto p = counter();
  auto dom = domain_for(p.a, {predicate(lin_term::var("x"), 0)});
  lia_solver s;
  query_cache cache;
  abs_stats stats;
  auto sys = build_abstraction(p.a, dom, s, cache, stats);

  SUBCASE("adding x <= 5 splits the right cell") {
    abs_stats stats2;
    auto refined =
        refine_abstraction(sys, {predicate(lin_term::var("x"), 5)}, s, cache,
                           stats2);
    // from-scratch comparison with a cold cache
    lia_solver s2;
    query_cache cold;
    abs_stats stats3;
    auto fresh = build_abstraction(
        p.a,
        domain_for(p.a, {predicate(lin_term::var("x"), 0),
                         predicate(lin_term::var("x"), 5)}),
        s2, cold, stats3);
    CHECK(refined.same_graph(fresh));

    // from (0,5] under e the successors are (0,5] and (5,inf)
    const auto& tp = refined.dom.part(0);
    REQUIRE(tp.cell_count() == 3);
    uint32_t mid = refined.cells_index.at({1});
    auto it = refined.delta.find({mid, refined.bool_mask({"e"}, {})});
    REQUIRE(it != refined.delta.end());
    std::set<uint16_t> succs;
    for (auto& su : it->second) succs.insert(refined.cells_pool[su.cells][0]);
    CHECK(succs == std::set<uint16_t>{1, 2});
  }

  SUBCASE("adding an already-present predicate is idempotent") {
    abs_stats stats2;
    auto refined = refine_abstraction(sys, {predicate(lin_term::var("x"), 0)},
                                      s, cache, stats2);
    CHECK(refined.same_graph(sys));
  }
}

TEST_CASE("abstraction soundness on random bounded arenas") {
  // every concrete run of length <= 8 must have an abstract counterpart
  lia_solver s;
  int arenas_checked = 0;
  for (int round = 0; round < 12; ++round) {
    problem p;
    p.a.vars = {{"x", rand_int(-2, 2)}, {"y", rand_int(-2, 2)}};
    p.a.env_bools = {"e"};
    p.a.con_bools = {"c"};
    auto rand_update = [&]() -> std::map<std::string, lin_term> {
      std::map<std::string, lin_term> u;
      if (rand_int(0, 1))
        u["x"] = lin_term::var("x") + lin_term(rand_int(-1, 1));
      if (rand_int(0, 1))
        u["y"] = lin_term::var(rand_int(0, 1) ? "x" : "y") +
                 lin_term(rand_int(-1, 1));
      return u;
    };
    // exhaustive boolean split keeps the arena deterministic and total
    formula_ptr ge = f_pred(predicate(lin_term::var("x"), rand_int(-2, 2),
                                      polarity::not_leq));
    p.a.transitions.push_back({f_and(f_prop("e"), ge), rand_update()});
    p.a.transitions.push_back({f_and(f_prop("e"), f_not(ge)), rand_update()});
    p.a.transitions.push_back({f_not(f_prop("e")), rand_update()});

    std::vector<predicate> preds;
    preds.push_back(predicate(lin_term::var("x"), rand_int(-2, 2)));
    if (rand_int(0, 1))
      preds.push_back(
          predicate(lin_term::var("y") - lin_term::var("x"), rand_int(-1, 1)));
    auto dom = domain_for(p.a, preds);
    query_cache cache;
    abs_stats stats;
    auto sys = build_abstraction(p.a, dom, s, cache, stats);

    // depth-first over all boolean choice sequences of length <= 8,
    // checking containment of the exact abstract run
    struct frame {
      valuation v;
      uint32_t cells;
      int depth;
    };
    std::vector<frame> stack{{p.a.initial(), sys.init_cells, 0}};
    valuation v0 = p.a.initial();
    REQUIRE(sys.cells_pool[sys.init_cells] == sys.dom.cells_at(v0));
    int runs = 0;
    std::function<void(const valuation&, uint32_t, int)> walk =
        [&](const valuation& v, uint32_t cells, int depth) {
          if (depth == 8) {
            ++runs;
            return;
          }
          for (uint16_t ec = 0; ec < 4; ++ec) {
            auto [in, out] = sys.split_mask(ec);
            valuation nxt = step(p.a, v, in, out);
            auto ncells = sys.dom.cells_at(nxt);
            auto nstep = sys.dom.step_at(v, nxt);
            bool found = false;
            if (depth == 0) {
              auto& su = sys.init_delta.at(ec);
              found = sys.cells_pool[su.cells] == ncells && su.step == nstep;
            } else {
              auto it = sys.delta.find({cells, ec});
              if (it != sys.delta.end())
                for (auto& su : it->second)
                  found |= sys.cells_pool[su.cells] == ncells &&
                           su.step == nstep;
            }
            REQUIRE(found);
            walk(nxt, sys.cells_index.at(ncells), depth + 1);
          }
        };
    walk(p.a.initial(), sys.init_cells, 0);
    CHECK(runs > 0);
    ++arenas_checked;
  }
  CHECK(arenas_checked == 12);
}
