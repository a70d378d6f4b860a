#include "isynt/backend.hpp"

#include <algorithm>
#include <array>
#include <functional>

namespace isynt {

namespace {

std::vector<letter> submasks_sorted(letter mask) {
  std::vector<letter> out;
  letter s = mask;
  for (;;) {
    out.push_back(s);
    if (s == 0) break;
    s = (s - 1) & mask;
  }
  std::sort(out.begin(), out.end());
  return out;
}

// evaluate an X-depth-1 boolean formula on a pair of letters
bool eval_step_formula(const formula_ptr& f, letter now, letter next,
                       const prop_table& props, bool shifted = false) {
  switch (f->op) {
    case ltl_op::tt:
      return true;
    case ltl_op::ff:
      return false;
    case ltl_op::prop:
      return ((shifted ? next : now) & props.bit(f->prop)) != 0;
    case ltl_op::not_:
      return !eval_step_formula(f->kids[0], now, next, props, shifted);
    case ltl_op::and_:
      for (auto& k : f->kids)
        if (!eval_step_formula(k, now, next, props, shifted)) return false;
      return true;
    case ltl_op::or_:
      for (auto& k : f->kids)
        if (eval_step_formula(k, now, next, props, shifted)) return true;
      return false;
    case ltl_op::implies:
      return !eval_step_formula(f->kids[0], now, next, props, shifted) ||
             eval_step_formula(f->kids[1], now, next, props, shifted);
    case ltl_op::iff:
      return eval_step_formula(f->kids[0], now, next, props, shifted) ==
             eval_step_formula(f->kids[1], now, next, props, shifted);
    case ltl_op::next:
      if (shifted) throw std::logic_error("step formula nests X");
      return eval_step_formula(f->kids[0], now, next, props, true);
    case ltl_op::globally: {
      // a G wrapper marks an every-position conjunct; evaluate the body
      return eval_step_formula(f->kids[0], now, next, props, shifted);
    }
    default:
      throw std::logic_error("not a step formula: " + f->str());
  }
}

}  // namespace

trivial_monitor::trivial_monitor(letter input_mask)
    : choices_(submasks_sorted(input_mask)) {}

abs_monitor::abs_monitor(const abs_system& sys, const prop_table& props,
                         std::vector<std::string> monitor_bits,
                         std::vector<formula_ptr> initial_conj,
                         std::vector<formula_ptr> invariant_conj,
                         std::vector<formula_ptr> step_conj)
    : sys_(&sys),
      props_(&props),
      initial_conj_(std::move(initial_conj)),
      invariant_conj_(std::move(invariant_conj)),
      step_conj_(std::move(step_conj)) {
  for (size_t ti = 0; ti < sys.dom.terms.size(); ++ti) {
    std::vector<int> bits;
    for (int b = 0; b < sys.dom.part(ti).bit_width(); ++b)
      bits.push_back(props.find(bit_names::cell_bit(ti, b)));
    cell_bits_.push_back(std::move(bits));
  }
  for (size_t g = 0; g < sys.dom.groups.size(); ++g)
    delta_bits_.push_back({props.find(bit_names::delta_bit(g, 0)),
                           props.find(bit_names::delta_bit(g, 1))});
  for (auto& sa : sys.dom.satoms) satom_bits_.push_back(props.find(sa.name));
  for (auto& n : monitor_bits) {
    int i = props.find(n);
    monitor_bit_idx_.push_back(i);
    monitor_mask_ |= letter{1} << i;
  }
  for (size_t i = 0; i < sys.bools.size(); ++i) {
    int pi = props.find(sys.bools[i]);
    bool_idx_.push_back(pi);
    if (i < sys.env_count) env_free_mask_ |= letter{1} << pi;
  }
  states_.push_back({0, 0, 0});
}

uint32_t abs_monitor::intern(const mstate& s) const {
  auto key = std::make_tuple(s.phase, s.prev);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  uint32_t id = static_cast<uint32_t>(states_.size());
  states_.push_back(s);
  index_.emplace(key, id);
  return id;
}

std::optional<abs_monitor::decoded> abs_monitor::decode(letter l) const {
  decoded d;
  for (size_t ti = 0; ti < cell_bits_.size(); ++ti) {
    size_t code = 0;
    for (size_t b = 0; b < cell_bits_[ti].size(); ++b)
      if (l & (letter{1} << cell_bits_[ti][b])) code |= size_t{1} << b;
    auto cell = sys_->dom.part(ti).cell_of_code(code);
    if (!cell) return std::nullopt;  // dead code
    d.cells.push_back(static_cast<uint16_t>(*cell));
  }
  for (auto& db : delta_bits_) {
    int code = ((l >> db[0]) & 1) | (((l >> db[1]) & 1) << 1);
    if (code > 2) return std::nullopt;  // one-hot group overflow
    d.step.deltas.push_back(static_cast<step_delta>(code));
  }
  for (int sb : satom_bits_) d.step.atoms.push_back((l >> sb) & 1);
  for (size_t i = 0; i < bool_idx_.size(); ++i)
    if (l & (letter{1} << bool_idx_[i])) d.ec |= uint16_t(1) << i;
  d.monitor = l & monitor_mask_;
  return d;
}

letter abs_monitor::encode_cells(const std::vector<uint16_t>& cells) const {
  letter l = 0;
  for (size_t ti = 0; ti < cells.size(); ++ti)
    for (size_t b = 0; b < cell_bits_[ti].size(); ++b)
      if ((cells[ti] >> b) & 1) l |= letter{1} << cell_bits_[ti][b];
  return l;
}

letter abs_monitor::encode_step(const step_bits& sb) const {
  letter l = 0;
  for (size_t g = 0; g < delta_bits_.size(); ++g) {
    int code = static_cast<int>(sb.deltas[g]);
    if (code & 1) l |= letter{1} << delta_bits_[g][0];
    if (code & 2) l |= letter{1} << delta_bits_[g][1];
  }
  for (size_t s = 0; s < satom_bits_.size(); ++s)
    if (sb.atoms[s]) l |= letter{1} << satom_bits_[s];
  return l;
}

uint16_t abs_monitor::ec_of_letter(letter l) const {
  uint16_t ec = 0;
  for (size_t i = 0; i < bool_idx_.size(); ++i)
    if (l & (letter{1} << bool_idx_[i])) ec |= uint16_t(1) << i;
  return ec;
}

bool abs_monitor::position_ok(letter l, bool initial) const {
  for (auto& f : invariant_conj_)
    if (!eval_step_formula(f, l, l, *props_)) return false;
  if (initial)
    for (auto& f : initial_conj_)
      if (!eval_step_formula(f, l, l, *props_)) return false;
  return true;
}

bool abs_monitor::pair_ok(letter prev, letter cur) const {
  for (auto& f : step_conj_)
    if (!eval_step_formula(f, prev, cur, *props_)) return false;
  return true;
}

std::optional<uint32_t> abs_monitor::step(uint32_t st, letter l) const {
  const mstate s = states_[st];
  auto d = decode(l);
  if (!d) return std::nullopt;
  auto it = sys_->cells_index.find(d->cells);
  if (it == sys_->cells_index.end()) return std::nullopt;
  uint32_t cid = it->second;

  if (s.phase == 0) {
    if (cid != sys_->init_cells) return std::nullopt;
    if (!(d->step == sys_->dom.initial_step())) return std::nullopt;
    if (!position_ok(l, true)) return std::nullopt;
    return intern({1, l, cid});
  }
  if (!position_ok(l, false)) return std::nullopt;
  if (!pair_ok(s.prev, l)) return std::nullopt;
  uint16_t prev_ec = ec_of_letter(s.prev);
  if (s.phase == 1) {
    const auto& su = sys_->init_delta.at(prev_ec);
    if (su.cells != cid || !(su.step == d->step)) return std::nullopt;
    return intern({2, l, cid});
  }
  auto dit = sys_->delta.find({s.prev_cells, prev_ec});
  if (dit == sys_->delta.end()) return std::nullopt;
  for (auto& su : dit->second)
    if (su.cells == cid && su.step == d->step) return intern({2, l, cid});
  return std::nullopt;
}

std::vector<letter> abs_monitor::env_choices(uint32_t st) const {
  const mstate s = states_[st];
  std::vector<letter> bases;
  if (s.phase == 0) {
    bases.push_back(encode_cells(sys_->cells_pool[sys_->init_cells]) |
                    encode_step(sys_->dom.initial_step()));
  } else if (s.phase == 1) {
    const auto& su = sys_->init_delta.at(ec_of_letter(s.prev));
    bases.push_back(encode_cells(sys_->cells_pool[su.cells]) |
                    encode_step(su.step));
  } else {
    auto dit = sys_->delta.find({s.prev_cells, ec_of_letter(s.prev)});
    if (dit != sys_->delta.end())
      for (auto& su : dit->second)
        bases.push_back(encode_cells(sys_->cells_pool[su.cells]) |
                        encode_step(su.step));
  }
  std::vector<letter> out;
  for (letter b : bases)
    for (letter e : submasks_sorted(env_free_mask_))
      for (letter mbits : submasks_sorted(monitor_mask_))
        out.push_back(b | e | mbits);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

// ---- the K-bounded universal co-Buechi safety game ----

constexpr int64_t kLoss = -1;
constexpr int64_t kWin = -2;

struct game {
  const game_problem* p;
  const nba* ucb;
  bool protagonist_first;   // moore counterstrategy search
  bool collapse_empty;      // empty counting is an absorbing win
  int K;
  long budget;

  std::vector<letter> out_letters;

  using counting = std::vector<int8_t>;
  std::map<std::pair<uint32_t, counting>, uint32_t> index;
  struct node {
    uint32_t mon;
    counting c;
    // first-mover choices; per choice, successors per second-mover letter
    std::vector<letter> choices;
    std::vector<std::vector<int64_t>> succ;
    bool expanded = false;
  };
  std::vector<node> nodes;

  std::map<std::pair<uint32_t, letter>,
           std::vector<std::pair<uint32_t, bool>>>
      edge_memo;

  const std::vector<std::pair<uint32_t, bool>>& ucb_edges(uint32_t q,
                                                          letter l) {
    auto key = std::make_pair(q, l);
    auto it = edge_memo.find(key);
    if (it != edge_memo.end()) return it->second;
    std::vector<std::pair<uint32_t, bool>> out;
    for (auto& e : ucb->edges[q])
      if (e.matches(l)) out.push_back({e.dst, ucb->accepting[e.dst]});
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return edge_memo.emplace(key, std::move(out)).first->second;
  }

  // returns kLoss on overflow
  std::optional<counting> advance(const counting& c, letter l) {
    counting n(ucb->size(), -1);
    for (uint32_t q = 0; q < c.size(); ++q) {
      if (c[q] < 0) continue;
      for (auto& [dst, acc] : ucb_edges(q, l)) {
        int v = c[q] + (acc ? 1 : 0);
        if (v > K) return std::nullopt;
        if (v > n[dst]) n[dst] = static_cast<int8_t>(v);
      }
    }
    return n;
  }
  static bool empty_counting(const counting& c) {
    for (auto v : c)
      if (v >= 0) return false;
    return true;
  }

  int64_t intern(uint32_t mon, counting c, std::vector<uint32_t>& work) {
    if (collapse_empty && empty_counting(c)) return kWin;
    auto key = std::make_pair(mon, c);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(nodes.size());
    nodes.push_back({mon, std::move(c), {}, {}, false});
    index.emplace(std::make_pair(mon, nodes[id].c), id);
    work.push_back(id);
    return id;
  }

  // explore the reachable game graph; false on budget exhaustion
  bool build(uint32_t init_mon, counting init_c) {
    std::vector<uint32_t> work;
    if (intern(init_mon, std::move(init_c), work) < 0) return true;  // trivially done
    while (!work.empty()) {
      if (static_cast<long>(nodes.size()) > budget) return false;
      uint32_t id = work.back();
      work.pop_back();
      uint32_t mon = nodes[id].mon;
      counting c = nodes[id].c;  // copy: nodes may reallocate
      std::vector<letter> choices;
      std::vector<std::vector<int64_t>> succ;
      for (letter env : p->monitor->env_choices(mon)) {
        if (!p->monitor->step(mon, env)) continue;  // invalid input part
        std::vector<int64_t> row;
        row.reserve(out_letters.size());
        for (letter o : out_letters) {
          letter l = env | o;
          auto mon2 = p->monitor->step(mon, l);
          if (!mon2) throw std::logic_error("monitor validity depends on outputs");
          auto c2 = advance(c, l);
          if (!c2)
            row.push_back(kLoss);
          else
            row.push_back(intern(*mon2, std::move(*c2), work));
        }
        choices.push_back(env);
        succ.push_back(std::move(row));
      }
      nodes[id].choices = std::move(choices);
      nodes[id].succ = std::move(succ);
      nodes[id].expanded = true;
    }
    return true;
  }

  // safety fixpoint; true iff node 0 is winning for the protagonist
  std::vector<char> losing;
  bool solve_fixpoint() {
    losing.assign(nodes.size(), 0);
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t i = 0; i < nodes.size(); ++i) {
        if (losing[i]) continue;
        bool lose;
        auto bad = [&](int64_t s) {
          return s == kLoss || (s >= 0 && losing[static_cast<size_t>(s)]);
        };
        if (protagonist_first) {
          // protagonist picks the choice, adversary the column
          lose = true;
          for (auto& row : nodes[i].succ) {
            bool all_good = true;
            for (auto s : row) all_good = all_good && !bad(s);
            if (all_good) {
              lose = false;
              break;
            }
          }
          if (nodes[i].succ.empty()) lose = true;
        } else {
          // adversary picks the choice, protagonist the column
          lose = false;
          for (auto& row : nodes[i].succ) {
            bool any_good = false;
            for (auto s : row) any_good = any_good || !bad(s);
            if (!any_good) {
              lose = true;
              break;
            }
          }
        }
        if (lose) {
          losing[i] = 1;
          changed = true;
        }
      }
    }
    return nodes.empty() ? true : !losing[0];
  }
};

strategy_machine extract_mealy(game& g, const game_problem& p) {
  strategy_machine m;
  m.kind = strategy_machine::kind_t::mealy;
  m.props = p.props;
  m.input_mask = p.input_mask;
  m.output_mask = p.output_mask;

  std::map<int64_t, uint32_t> mstate;
  std::vector<int64_t> work;
  auto state_of = [&](int64_t n) {
    auto it = mstate.find(n);
    if (it != mstate.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(m.states.size());
    m.states.emplace_back();
    mstate.emplace(n, id);
    work.push_back(n);
    return id;
  };
  uint32_t sink = state_of(kWin);
  m.states[sink].otherwise = strategy_machine::edge{0, 0, sink};
  m.initial = state_of(0);
  while (!work.empty()) {
    int64_t n = work.back();
    work.pop_back();
    if (n == kWin) continue;
    uint32_t sid = mstate.at(n);
    auto& gn = g.nodes[static_cast<size_t>(n)];
    for (size_t ci = 0; ci < gn.choices.size(); ++ci) {
      // first output that stays winning
      for (size_t oi = 0; oi < g.out_letters.size(); ++oi) {
        int64_t s = gn.succ[ci][oi];
        bool good = s == kWin || (s >= 0 && !g.losing[static_cast<size_t>(s)]);
        if (!good) continue;
        m.states[sid].edges.push_back(
            {gn.choices[ci], g.out_letters[oi], state_of(s)});
        break;
      }
    }
    m.states[sid].otherwise = strategy_machine::edge{0, 0, sink};
  }
  m.reduce();
  return m;
}

strategy_machine extract_moore(game& g, const game_problem& p) {
  strategy_machine m;
  m.kind = strategy_machine::kind_t::moore;
  m.props = p.props;
  m.input_mask = p.output_mask;   // reads the controller's booleans
  m.output_mask = p.input_mask;   // emits the environment part

  std::map<int64_t, uint32_t> mstate;
  std::vector<int64_t> work;
  auto state_of = [&](int64_t n) {
    auto it = mstate.find(n);
    if (it != mstate.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(m.states.size());
    m.states.emplace_back();
    mstate.emplace(n, id);
    work.push_back(n);
    return id;
  };
  m.initial = state_of(0);
  while (!work.empty()) {
    int64_t n = work.back();
    work.pop_back();
    uint32_t sid = mstate.at(n);
    auto& gn = g.nodes[static_cast<size_t>(n)];
    // the winning choice fixed at this state
    size_t pick = gn.choices.size();
    for (size_t ci = 0; ci < gn.choices.size(); ++ci) {
      bool all_good = true;
      for (auto s : gn.succ[ci])
        all_good = all_good &&
                   (s == kWin || (s >= 0 && !g.losing[static_cast<size_t>(s)]));
      if (all_good) {
        pick = ci;
        break;
      }
    }
    if (pick == gn.choices.size())
      throw std::logic_error("moore extraction from a losing node");
    m.states[sid].output = gn.choices[pick];
    for (size_t oi = 0; oi < g.out_letters.size(); ++oi)
      m.states[sid].edges.push_back(
          {g.out_letters[oi], 0, state_of(gn.succ[pick][oi])});
  }
  m.reduce();
  return m;
}

// product Buechi emptiness: reachable cycle through an accepting q
struct product_explorer {
  using key = std::tuple<uint32_t, uint32_t, uint32_t>;  // machine, mon, ucb
  std::map<key, int> ids;
  std::vector<key> keys;
  std::vector<std::vector<int>> adj;
  std::vector<bool> acc;

  int intern(const key& k, bool accepting, std::vector<key>& work) {
    auto it = ids.find(k);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(keys.size());
    ids.emplace(k, id);
    keys.push_back(k);
    adj.emplace_back();
    acc.push_back(accepting);
    work.push_back(k);
    return id;
  }

  // true iff an accepting cycle exists (language nonempty)
  bool has_accepting_cycle() const {
    // iterative Tarjan SCC
    const int n = static_cast<int>(keys.size());
    std::vector<int> idx(n, -1), low(n, 0), comp(n, -1);
    std::vector<char> on(n, 0);
    std::vector<int> stk;
    int counter = 0, ncomp = 0;
    std::vector<std::tuple<int, size_t>> call;
    for (int root = 0; root < n; ++root) {
      if (idx[root] != -1) continue;
      call.push_back({root, 0});
      idx[root] = low[root] = counter++;
      stk.push_back(root);
      on[root] = 1;
      while (!call.empty()) {
        auto& [v, ei] = call.back();
        if (ei < adj[v].size()) {
          int w = adj[v][ei++];
          if (idx[w] == -1) {
            idx[w] = low[w] = counter++;
            stk.push_back(w);
            on[w] = 1;
            call.push_back({w, 0});
          } else if (on[w]) {
            low[v] = std::min(low[v], idx[w]);
          }
        } else {
          if (low[v] == idx[v]) {
            std::vector<int> scc;
            int w;
            do {
              w = stk.back();
              stk.pop_back();
              on[w] = 0;
              comp[w] = ncomp;
              scc.push_back(w);
            } while (w != v);
            ++ncomp;
            // accepting cycle: SCC with an accepting state and an edge
            // inside (self-loop or size > 1)
            bool has_acc = false;
            for (int s : scc) has_acc = has_acc || acc[s];
            if (has_acc) {
              bool has_edge = scc.size() > 1;
              if (!has_edge)
                for (int t : adj[scc[0]]) has_edge = has_edge || t == scc[0];
              if (has_edge) return true;
            }
          }
          int vv = v;
          call.pop_back();
          if (!call.empty()) {
            int parent = std::get<0>(call.back());
            low[parent] = std::min(low[parent], low[vv]);
          }
        }
      }
    }
    return false;
  }
};

}  // namespace

bool verify_machine(const strategy_machine& m, const game_problem& p,
                    const backend_limits& lim) {
  if (!m.complete()) return false;
  if (m.kind == strategy_machine::kind_t::mealy) {
    // no trace may satisfy monitor & assumptions & !goal
    nba ucb = ltl_to_nba(f_and(p.assumptions, f_not(p.goal)), p.props,
                         lim.nba_state_limit);
    product_explorer px;
    std::vector<product_explorer::key> work;
    for (auto q0 : ucb.initial)
      px.intern({m.initial, p.monitor->initial_state(), q0},
                ucb.accepting[q0], work);
    while (!work.empty()) {
      auto [ms, mon, q] = work.back();
      work.pop_back();
      int src = px.ids.at({ms, mon, q});
      for (letter env : p.monitor->env_choices(mon)) {
        if (!p.monitor->step(mon, env)) continue;
        letter l = m.emit(ms, env);
        auto mon2 = p.monitor->step(mon, l);
        if (!mon2) continue;
        uint32_t ms2 = m.at(ms, env).next;
        for (auto& e : ucb.edges[q]) {
          if (!e.matches(l)) continue;
          int dst = px.intern({ms2, *mon2, e.dst}, ucb.accepting[e.dst], work);
          px.adj[src].push_back(dst);
        }
        if (px.keys.size() > static_cast<size_t>(lim.game_node_budget))
          return false;
      }
    }
    return !px.has_accepting_cycle();
  }

  // moore counterstrategy: (a) it never breaks the monitor,
  // (b) no trace satisfies !assumptions | goal
  {
    std::set<std::pair<uint32_t, uint32_t>> seen;
    std::vector<std::pair<uint32_t, uint32_t>> work{
        {m.initial, p.monitor->initial_state()}};
    seen.insert(work[0]);
    auto inputs = submasks_sorted(m.input_mask);
    while (!work.empty()) {
      auto [ms, mon] = work.back();
      work.pop_back();
      for (letter c : inputs) {
        letter l = m.emit(ms, c);
        auto mon2 = p.monitor->step(mon, l);
        if (!mon2) return false;  // counterstrategy broke the abstraction
        auto nxt = std::make_pair(m.at(ms, c).next, *mon2);
        if (seen.insert(nxt).second) work.push_back(nxt);
      }
    }
  }
  nba ucb = ltl_to_nba(f_or(f_not(p.assumptions), p.goal), p.props,
                       lim.nba_state_limit);
  product_explorer px;
  std::vector<product_explorer::key> work;
  for (auto q0 : ucb.initial)
    px.intern({m.initial, 0, q0}, ucb.accepting[q0], work);
  auto inputs = submasks_sorted(m.input_mask);
  while (!work.empty()) {
    auto [ms, z, q] = work.back();
    work.pop_back();
    int src = px.ids.at({ms, z, q});
    for (letter c : inputs) {
      letter l = m.emit(ms, c);
      uint32_t ms2 = m.at(ms, c).next;
      for (auto& e : ucb.edges[q]) {
        if (!e.matches(l)) continue;
        int dst = px.intern({ms2, 0, e.dst}, ucb.accepting[e.dst], work);
        px.adj[src].push_back(dst);
      }
    }
    if (px.keys.size() > static_cast<size_t>(lim.game_node_budget))
      return false;
  }
  return !px.has_accepting_cycle();
}

namespace {

std::optional<strategy_machine> try_side(const game_problem& p, bool cs_side,
                                         int K, const backend_limits& lim,
                                         bool& budget_hit) {
  game g;
  g.p = &p;
  g.protagonist_first = cs_side;
  g.collapse_empty = !cs_side;
  g.K = K;
  g.budget = lim.game_node_budget;

  nba ucb = cs_side ? ltl_to_nba(f_or(f_not(p.assumptions), p.goal), p.props,
                                 lim.nba_state_limit)
                    : ltl_to_nba(f_and(p.assumptions, f_not(p.goal)), p.props,
                                 lim.nba_state_limit);
  g.ucb = &ucb;
  g.out_letters = submasks_sorted(p.output_mask);

  game::counting c0(ucb.size(), -1);
  for (auto q : ucb.initial) {
    int v = ucb.accepting[q] ? 1 : 0;
    if (v > K) return std::nullopt;
    c0[q] = std::max<int8_t>(c0[q], static_cast<int8_t>(v));
  }
  if (!g.build(p.monitor->initial_state(), std::move(c0))) {
    budget_hit = true;
    return std::nullopt;
  }
  if (g.nodes.empty()) {
    // the initial counting collapsed to an absorbing win
    if (!cs_side) {
      strategy_machine m;
      m.kind = strategy_machine::kind_t::mealy;
      m.props = p.props;
      m.input_mask = p.input_mask;
      m.output_mask = p.output_mask;
      m.states.emplace_back();
      m.states[0].otherwise = strategy_machine::edge{0, 0, 0};
      return m;
    }
    return std::nullopt;
  }
  if (!g.solve_fixpoint()) return std::nullopt;
  return cs_side ? extract_moore(g, p) : extract_mealy(g, p);
}

}  // namespace

synthesis_result solve_game(const game_problem& p, const bound_schedule& sched,
                            const backend_limits& lim) {
  bool budget_hit = false;
  for (int K : sched.bounds) {
    if (auto m = try_side(p, false, K, lim, budget_hit)) {
      if (!verify_machine(*m, p, lim))
        return {verdict_kind::unknown, std::nullopt,
                "internal error: controller failed verification", K};
      return {verdict_kind::realisable, std::move(m), "", K};
    }
    if (auto m = try_side(p, true, K, lim, budget_hit)) {
      if (!verify_machine(*m, p, lim))
        return {verdict_kind::unknown, std::nullopt,
                "internal error: counterstrategy failed verification", K};
      return {verdict_kind::unrealisable, std::move(m), "", K};
    }
  }
  return {verdict_kind::unknown, std::nullopt,
          budget_hit ? "game node budget exhausted" : "bound schedule exhausted",
          sched.bounds.empty() ? 0 : sched.bounds.back()};
}

synthesis_result solve(const synthesis_problem& p, const bound_schedule& sched,
                       const backend_limits& lim) {
  game_problem gp;
  gp.assumptions = f_true();
  gp.goal = p.spec;
  for (auto& i : p.inputs) gp.input_mask |= letter{1} << gp.props.add(i);
  for (auto& o : p.outputs) {
    if (gp.props.find(o) >= 0)
      throw std::invalid_argument("proposition is both input and output: " + o);
    gp.output_mask |= letter{1} << gp.props.add(o);
  }
  for (auto& s : subformulas(p.spec))
    if (s->op == ltl_op::prop && gp.props.find(s->prop) < 0)
      throw std::invalid_argument("undeclared proposition: " + s->prop);
  trivial_monitor mon(gp.input_mask);
  gp.monitor = &mon;
  return solve_game(gp, sched, lim);
}

}  // namespace isynt
