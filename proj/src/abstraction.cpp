#include "isynt/abstraction.hpp"

#include <algorithm>
#include <sstream>

namespace isynt {

std::vector<uint16_t> abs_domain::cells_at(const valuation& v) const {
  std::vector<uint16_t> cells;
  cells.reserve(terms.size());
  for (auto& t : terms)
    cells.push_back(static_cast<uint16_t>(parts.at(t).cell_at(v)));
  return cells;
}

step_bits abs_domain::step_at(const valuation& prev,
                              const valuation& cur) const {
  step_bits sb;
  for (auto& g : groups) {
    i64 d = g.term.eval(cur) - g.term.eval(prev);
    sb.deltas.push_back(d == 0 ? step_delta::none
                               : d > 0 ? step_delta::inc : step_delta::dec);
  }
  for (auto& s : satoms) {
    bool v = true;
    for (auto& p : s.literals) v = v && eval_predicate(p, &prev, cur);
    sb.atoms.push_back(v);
  }
  return sb;
}

uint16_t abs_system::bool_mask(const boolset& in, const boolset& out) const {
  uint16_t m = 0;
  for (size_t i = 0; i < bools.size(); ++i)
    if ((i < env_count ? in : out).count(bools[i])) m |= uint16_t(1) << i;
  return m;
}

std::pair<boolset, boolset> abs_system::split_mask(uint16_t ec) const {
  boolset in, out;
  for (size_t i = 0; i < bools.size(); ++i)
    if (ec & (uint16_t(1) << i))
      (i < env_count ? in : out).insert(bools[i]);
  return {in, out};
}

uint32_t abs_system::intern(const std::vector<uint16_t>& c) {
  auto it = cells_index.find(c);
  if (it != cells_index.end()) return it->second;
  uint32_t id = static_cast<uint32_t>(cells_pool.size());
  cells_pool.push_back(c);
  cells_index.emplace(c, id);
  return id;
}

bool abs_system::same_graph(const abs_system& o) const {
  if (cells_pool.size() != o.cells_pool.size()) return false;
  if (!(cells_pool[init_cells] == o.cells_pool[o.init_cells])) return false;
  auto key = [](const abs_system& s, uint32_t id) { return s.cells_pool[id]; };
  if (init_delta.size() != o.init_delta.size()) return false;
  for (auto& [ec, su] : init_delta) {
    auto it = o.init_delta.find(ec);
    if (it == o.init_delta.end()) return false;
    if (!(key(*this, su.cells) == key(o, it->second.cells))) return false;
    if (!(su.step == it->second.step)) return false;
  }
  if (delta.size() != o.delta.size()) return false;
  for (auto& [k, succs] : delta) {
    auto it = o.delta.find({o.cells_index.at(key(*this, k.first)), k.second});
    if (it == o.delta.end()) return false;
    if (succs.size() != it->second.size()) return false;
    for (size_t i = 0; i < succs.size(); ++i) {
      if (!(key(*this, succs[i].cells) == key(o, it->second[i].cells)))
        return false;
      if (!(succs[i].step == it->second[i].step)) return false;
    }
  }
  return true;
}

namespace {

std::string interval_key(const term_partition& tp, size_t cell) {
  auto lo = tp.cell_lower(cell), hi = tp.cell_upper(cell);
  std::string s = lo ? std::to_string(*lo) : "-inf";
  s += ",";
  s += hi ? std::to_string(*hi) : "+inf";
  return s;
}

// cell constraints with variables renamed to the pre-state copy
std::vector<lin_constraint> cell_prev(const term_partition& tp, size_t cell) {
  auto cs = tp.cell_constraints(cell);
  for (auto& c : cs) c.term = c.term.rename(prev_var);
  return cs;
}

struct build_ctx {
  const arena* a;
  const abs_domain* dom;
  lia_solver* solver;
  query_cache* cache;
  abs_stats* stats;

  // guard cubes per (transition, ec mask)
  std::vector<std::vector<std::vector<std::vector<predicate>>>> cubes;

  // update equalities per transition (over prev/cur copies), total
  std::vector<std::vector<lin_constraint>> upd;

  bool query(const std::string& key, const std::vector<lin_constraint>& cs,
             std::pair<size_t, size_t>* term_counter) {
    auto it = cache->find(key);
    if (it != cache->end()) return it->second;
    bool s = solver->sat(cs);
    cache->emplace(key, s);
    if (term_counter)
      ++stats->term_queries[*term_counter];
    else
      ++stats->joint_queries;
    return s;
  }
};

std::string cube_key(const std::vector<predicate>& cube) {
  std::string s;
  for (auto& p : cube) {
    s += p.str();
    s += ";";
  }
  return s;
}

// base constraints: guard cube (prev) + update equalities
std::vector<lin_constraint> base_constraints(const build_ctx& ctx, size_t tr,
                                             const std::vector<predicate>& cube) {
  std::vector<lin_constraint> cs;
  for (auto& p : cube) {
    auto c = constraint_of(p);
    c.term = c.term.rename(prev_var);
    cs.push_back(c);
  }
  cs.insert(cs.end(), ctx.upd[tr].begin(), ctx.upd[tr].end());
  return cs;
}

// Enumerate jointly satisfiable transition-predicate variants on top of
// the base constraints. The search keeps a conjunctive constraint stack:
// a false step atom branches over which of its literals is falsified, and
// the resulting bit patterns are deduplicated.
void step_variants(build_ctx& ctx, const std::string& base_key,
                   const std::vector<lin_constraint>& base,
                   std::vector<step_bits>& out) {
  const auto& dom = *ctx.dom;
  std::set<step_bits> found;
  std::vector<lin_constraint> cs = base;
  std::string key = base_key;
  step_bits cur{{}, {}};

  std::function<void(size_t)> rec_atom = [&](size_t ai) {
    if (ai == dom.satoms.size()) {
      found.insert(cur);
      return;
    }
    const auto& sa = dom.satoms[ai];
    const size_t mark = cs.size();
    const size_t kmark = key.size();
    // atom true: all literals hold
    for (auto& p : sa.literals) cs.push_back(constraint_of(p));
    key += "|a" + std::to_string(ai) + "T";
    if (sa.literals.empty() || ctx.query(key, cs, nullptr)) {
      cur.atoms.push_back(true);
      rec_atom(ai + 1);
      cur.atoms.pop_back();
    }
    cs.resize(mark);
    key.resize(kmark);
    // atom false: branch per falsified literal
    for (size_t li = 0; li < sa.literals.size(); ++li) {
      cs.push_back(constraint_of(sa.literals[li].negated()));
      key += "|a" + std::to_string(ai) + "F" + std::to_string(li);
      if (ctx.query(key, cs, nullptr)) {
        cur.atoms.push_back(false);
        rec_atom(ai + 1);
        cur.atoms.pop_back();
      }
      cs.resize(mark);
      key.resize(kmark);
    }
  };

  std::function<void(size_t)> rec_group = [&](size_t gi) {
    if (gi == dom.groups.size()) {
      rec_atom(0);
      return;
    }
    lin_term d = dom.groups[gi].term - dom.groups[gi].term.rename(prev_var);
    struct choice {
      step_delta v;
      lin_constraint c;
    };
    const choice cands[] = {
        {step_delta::none, eq_constraint(d, 0)},
        {step_delta::inc, {-d, -1, constraint_sense::leq}},
        {step_delta::dec, {d, -1, constraint_sense::leq}}};
    for (auto& ch : cands) {
      const size_t mark = cs.size();
      const size_t kmark = key.size();
      cs.push_back(ch.c);
      key += "|g" + std::to_string(gi) + std::to_string(int(ch.v));
      if (ctx.query(key, cs, nullptr)) {
        cur.deltas.push_back(ch.v);
        rec_group(gi + 1);
        cur.deltas.pop_back();
      }
      cs.resize(mark);
      key.resize(kmark);
    }
  };
  rec_group(0);
  out.assign(found.begin(), found.end());
}

}  // namespace

abs_system build_abstraction(const arena& a, const abs_domain& dom,
                             lia_solver& solver, query_cache& cache,
                             abs_stats& stats) {
  abs_system sys;
  sys.dom = dom;
  sys.a = &a;
  sys.bools = a.env_bools;
  sys.bools.insert(sys.bools.end(), a.con_bools.begin(), a.con_bools.end());
  sys.env_count = a.env_bools.size();
  if (sys.bools.size() > 12)
    throw std::runtime_error("too many boolean variables for abstraction");

  build_ctx ctx{&a, &sys.dom, &solver, &cache, &stats, {}, {}};

  const size_t necs = size_t{1} << sys.bools.size();
  ctx.cubes.resize(a.transitions.size());
  ctx.upd.resize(a.transitions.size());
  for (size_t tr = 0; tr < a.transitions.size(); ++tr) {
    ctx.cubes[tr].resize(necs);
    for (size_t ec = 0; ec < necs; ++ec) {
      auto [in, out] = sys.split_mask(static_cast<uint16_t>(ec));
      ctx.cubes[tr][ec] =
          predicate_cubes(a.transitions[tr].guard, in, out);
    }
    // total update: unmentioned variables stutter
    for (auto& [v, init] : a.vars) {
      auto it = a.transitions[tr].update.find(v);
      lin_term rhs = it == a.transitions[tr].update.end()
                         ? lin_term::var(v)
                         : it->second;
      ctx.upd[tr].push_back(
          eq_constraint(lin_term::var(v) - rhs.rename(prev_var), 0));
    }
  }

  const valuation val0 = a.initial();
  sys.init_cells = sys.intern(sys.dom.cells_at(val0));

  // exact initial transition: simulate each boolean choice
  for (size_t ec = 0; ec < necs; ++ec) {
    auto [in, out] = sys.split_mask(static_cast<uint16_t>(ec));
    valuation v1 = step(a, val0, in, out);
    abs_system::succ s{sys.intern(sys.dom.cells_at(v1)),
                       sys.dom.step_at(val0, v1)};
    sys.init_delta.emplace(static_cast<uint16_t>(ec), s);
  }

  // forward closure over abstract transitions
  std::vector<uint32_t> work;
  std::set<uint32_t> seen;
  auto push = [&](uint32_t id) {
    if (seen.insert(id).second) work.push_back(id);
  };
  push(sys.init_cells);
  for (auto& [ec, s] : sys.init_delta) push(s.cells);

  while (!work.empty()) {
    uint32_t src = work.back();
    work.pop_back();
    const auto src_cells = sys.cells_pool[src];

    for (size_t ec = 0; ec < necs; ++ec) {
      std::vector<abs_system::succ> succs;
      for (size_t tr = 0; tr < a.transitions.size(); ++tr) {
        for (size_t cu = 0; cu < ctx.cubes[tr][ec].size(); ++cu) {
          const auto& cube = ctx.cubes[tr][ec][cu];
          std::string tckey =
              "t" + std::to_string(tr) + "|" + cube_key(cube) + "|";
          // source feasibility: cells (prev) & cube
          std::vector<lin_constraint> src_cs;
          std::string src_key = tckey + "src:";
          for (size_t ti = 0; ti < sys.dom.terms.size(); ++ti) {
            auto cs = cell_prev(sys.dom.part(ti), src_cells[ti]);
            src_cs.insert(src_cs.end(), cs.begin(), cs.end());
            src_key += interval_key(sys.dom.part(ti), src_cells[ti]) + "/";
          }
          for (auto& p : cube) {
            auto c = constraint_of(p);
            c.term = c.term.rename(prev_var);
            src_cs.push_back(c);
          }
          if (!ctx.query(src_key, src_cs, nullptr)) continue;

          // per-term successor candidates
          std::vector<std::vector<uint16_t>> cand(sys.dom.terms.size());
          bool dead = false;
          for (size_t ti = 0; ti < sys.dom.terms.size() && !dead; ++ti) {
            const auto& tp = sys.dom.part(ti);
            for (size_t dst = 0; dst < tp.cell_count(); ++dst) {
              std::pair<size_t, size_t> counter{tr, ti};
              std::string key = tckey + "term" + std::to_string(ti) + ":" +
                                interval_key(tp, src_cells[ti]) + ">" +
                                interval_key(tp, dst);
              auto cs = base_constraints(ctx, tr, cube);
              auto sc = cell_prev(tp, src_cells[ti]);
              cs.insert(cs.end(), sc.begin(), sc.end());
              auto dc = tp.cell_constraints(dst);
              cs.insert(cs.end(), dc.begin(), dc.end());
              if (ctx.query(key, cs, &counter))
                cand[ti].push_back(static_cast<uint16_t>(dst));
            }
            if (cand[ti].empty()) dead = true;  // cube infeasible with updates
          }
          if (dead) continue;

          // cartesian candidates, each validated jointly
          std::vector<uint16_t> pick(sys.dom.terms.size());
          std::function<void(size_t)> emit = [&](size_t ti) {
            if (ti == sys.dom.terms.size()) {
              auto cs = base_constraints(ctx, tr, cube);
              std::string jkey = tckey + "joint:" + src_key + ">";
              for (size_t i = 0; i < pick.size(); ++i) {
                auto sc = cell_prev(sys.dom.part(i), src_cells[i]);
                cs.insert(cs.end(), sc.begin(), sc.end());
                auto dc = sys.dom.part(i).cell_constraints(pick[i]);
                cs.insert(cs.end(), dc.begin(), dc.end());
                jkey += interval_key(sys.dom.part(i), pick[i]) + "/";
              }
              if (!ctx.query(jkey, cs, nullptr)) return;
              // enumerate transition-predicate variants on this move
              std::vector<step_bits> variants;
              step_variants(ctx, jkey, cs, variants);
              uint32_t dst_id = sys.intern(pick);
              for (auto& sb : variants)
                succs.push_back({dst_id, sb});
              return;
            }
            for (auto d : cand[ti]) {
              pick[ti] = d;
              emit(ti + 1);
            }
          };
          emit(0);
        }
      }
      std::sort(succs.begin(), succs.end());
      succs.erase(std::unique(succs.begin(), succs.end()), succs.end());
      if (!succs.empty()) {
        for (auto& s : succs) push(s.cells);
        sys.delta
            .emplace(std::make_pair(src, static_cast<uint16_t>(ec)),
                     std::move(succs));
      }
    }
  }
  return sys;
}

abs_system refine_abstraction(const abs_system& sys,
                              const std::vector<predicate>& new_preds,
                              lia_solver& solver, query_cache& cache,
                              abs_stats& stats) {
  abs_domain dom = sys.dom;
  for (auto& p : new_preds) {
    if (p.is_constant()) continue;
    if (p.kind() != pred_kind::state)
      throw std::logic_error("refine_abstraction takes state predicates");
    auto k = key_of(p.atom());
    auto it = dom.parts.find(k.key);
    if (it == dom.parts.end()) {
      dom.parts.emplace(k.key, term_partition(k.key, {k.cut}));
    } else {
      it->second = extend_partition(it->second, k.cut).partition;
    }
  }
  dom.terms.clear();
  for (auto& [t, tp] : dom.parts) dom.terms.push_back(t);
  auto out = build_abstraction(*sys.a, dom, solver, cache, stats);
  out.extra = sys.extra;
  return out;
}

formula_ptr cells_cube(const abs_system& sys, uint32_t cells) {
  std::vector<formula_ptr> lits;
  const auto& tup = sys.cells_pool[cells];
  for (size_t ti = 0; ti < sys.dom.terms.size(); ++ti) {
    int w = sys.dom.part(ti).bit_width();
    for (int b = 0; b < w; ++b) {
      auto v = f_prop(bit_names::cell_bit(ti, b));
      lits.push_back((tup[ti] >> b) & 1 ? v : f_not(v));
    }
  }
  return f_and(std::move(lits));
}

formula_ptr step_cube(const abs_system& sys, const step_bits& sb) {
  std::vector<formula_ptr> lits;
  for (size_t g = 0; g < sys.dom.groups.size(); ++g) {
    int code = static_cast<int>(sb.deltas[g]);  // none 0, inc 1, dec 2
    for (int b = 0; b < 2; ++b) {
      auto v = f_prop(bit_names::delta_bit(g, b));
      lits.push_back((code >> b) & 1 ? v : f_not(v));
    }
  }
  for (size_t s = 0; s < sys.dom.satoms.size(); ++s) {
    auto v = f_prop(sys.dom.satoms[s].name);
    lits.push_back(sb.atoms[s] ? v : f_not(v));
  }
  return f_and(std::move(lits));
}

formula_ptr lower_predicate(const abs_system& sys, const predicate& p) {
  if (p.is_constant()) return p.constant_value() ? f_true() : f_false();
  auto k = key_of(p.atom());
  auto it = sys.dom.parts.find(k.key);
  if (it == sys.dom.parts.end())
    throw std::logic_error("predicate over unpartitioned term: " + p.str());
  size_t ti = 0;
  for (; ti < sys.dom.terms.size(); ++ti)
    if (sys.dom.terms[ti] == k.key) break;
  const auto& tp = it->second;
  std::vector<formula_ptr> cells;
  for (auto c : pred_to_cells(p, tp)) {
    std::vector<formula_ptr> lits;
    for (int b = 0; b < tp.bit_width(); ++b) {
      auto v = f_prop(bit_names::cell_bit(ti, b));
      lits.push_back((c >> b) & 1 ? v : f_not(v));
    }
    cells.push_back(f_and(std::move(lits)));
  }
  return f_or(std::move(cells));
}

formula_ptr emit_ltl(const abs_system& sys) {
  std::vector<formula_ptr> conj;
  // initial predicate cube (cells exact, transition predicates off)
  conj.push_back(cells_cube(sys, sys.init_cells));
  conj.push_back(step_cube(sys, sys.dom.initial_step()));

  auto ec_cube = [&](uint16_t ec) {
    std::vector<formula_ptr> lits;
    for (size_t i = 0; i < sys.bools.size(); ++i) {
      auto v = f_prop(sys.bools[i]);
      lits.push_back(ec & (uint16_t(1) << i) ? v : f_not(v));
    }
    return f_and(std::move(lits));
  };

  // exact initial transition
  {
    std::vector<formula_ptr> disj;
    for (auto& [ec, s] : sys.init_delta)
      disj.push_back(f_and(
          ec_cube(ec),
          f_next(f_and(cells_cube(sys, s.cells), step_cube(sys, s.step)))));
    conj.push_back(f_or(std::move(disj)));
  }

  // all transitions
  {
    std::vector<formula_ptr> disj;
    for (auto& [key, succs] : sys.delta) {
      auto src = f_and(cells_cube(sys, key.first), ec_cube(key.second));
      for (auto& s : succs)
        disj.push_back(f_and(
            src,
            f_next(f_and(cells_cube(sys, s.cells), step_cube(sys, s.step)))));
    }
    conj.push_back(f_globally(f_or(std::move(disj))));
  }

  // unused bit patterns are dead
  for (size_t ti = 0; ti < sys.dom.terms.size(); ++ti) {
    const auto& tp = sys.dom.part(ti);
    size_t n = tp.cell_count();
    for (size_t code = n; code < (size_t{1} << tp.bit_width()); ++code) {
      std::vector<formula_ptr> lits;
      for (int b = 0; b < tp.bit_width(); ++b) {
        auto v = f_prop(bit_names::cell_bit(ti, b));
        lits.push_back((code >> b) & 1 ? v : f_not(v));
      }
      conj.push_back(f_globally(f_not(f_and(std::move(lits)))));
    }
  }
  for (size_t g = 0; g < sys.dom.groups.size(); ++g)
    conj.push_back(f_globally(
        f_not(f_and(f_prop(bit_names::delta_bit(g, 0)),
                    f_prop(bit_names::delta_bit(g, 1))))));

  for (auto& e : sys.extra) conj.push_back(e);
  return f_and(std::move(conj));
}

}  // namespace isynt
