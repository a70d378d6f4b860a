#include "isynt/nba.hpp"

#include <algorithm>
#include <functional>

namespace isynt {

namespace {

using fset = std::vector<formula_ptr>;  // canonically sorted, deduplicated

fset canon(std::vector<formula_ptr> fs) {
  std::sort(fs.begin(), fs.end(),
            [](const formula_ptr& a, const formula_ptr& b) {
              return compare(a, b) < 0;
            });
  fs.erase(std::unique(fs.begin(), fs.end(),
                       [](const formula_ptr& a, const formula_ptr& b) {
                         return equal(a, b);
                       }),
           fs.end());
  return fs;
}

struct fset_less {
  bool operator()(const fset& a, const fset& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    for (size_t i = 0; i < a.size(); ++i)
      if (int c = compare(a[i], b[i])) return c < 0;
    return false;
  }
};

// one fully expanded branch of a tableau state
struct branch {
  letter pos = 0, neg = 0;
  std::vector<formula_ptr> next;
  std::vector<formula_ptr> fulfilled;  // untils whose promise was met now
};

struct expander {
  const prop_table* props;
  std::vector<branch> out;

  void expand(std::vector<formula_ptr> todo, branch cur) {
    while (!todo.empty()) {
      formula_ptr f = todo.back();
      todo.pop_back();
      switch (f->op) {
        case ltl_op::tt:
          continue;
        case ltl_op::ff:
          return;  // branch dies
        case ltl_op::prop: {
          letter b = props->bit(f->prop);
          if (cur.neg & b) return;
          cur.pos |= b;
          continue;
        }
        case ltl_op::not_: {
          if (f->kids[0]->op != ltl_op::prop)
            throw std::logic_error("tableau: formula not in NNF");
          letter b = props->bit(f->kids[0]->prop);
          if (cur.pos & b) return;
          cur.neg |= b;
          continue;
        }
        case ltl_op::and_:
          for (auto& k : f->kids) todo.push_back(k);
          continue;
        case ltl_op::or_: {
          for (auto& k : f->kids) {
            auto t2 = todo;
            t2.push_back(k);
            expand(std::move(t2), cur);
          }
          return;
        }
        case ltl_op::next:
          cur.next.push_back(f->kids[0]);
          continue;
        case ltl_op::until: {
          // f = a U b: branch b (fulfilled) or a & X f
          {
            auto t2 = todo;
            t2.push_back(f->kids[1]);
            branch c2 = cur;
            c2.fulfilled.push_back(f);
            expand(std::move(t2), std::move(c2));
          }
          {
            auto t2 = todo;
            t2.push_back(f->kids[0]);
            branch c2 = cur;
            c2.next.push_back(f);
            expand(std::move(t2), std::move(c2));
          }
          return;
        }
        case ltl_op::release: {
          // f = a R b: b & (a | X f)
          {
            auto t2 = todo;
            t2.push_back(f->kids[1]);
            t2.push_back(f->kids[0]);
            expand(std::move(t2), cur);
          }
          {
            auto t2 = todo;
            t2.push_back(f->kids[1]);
            branch c2 = cur;
            c2.next.push_back(f);
            expand(std::move(t2), std::move(c2));
          }
          return;
        }
        case ltl_op::pred:
          throw std::logic_error("tableau: theory atom not lowered");
        default:
          throw std::logic_error("tableau: operator not in NNF");
      }
    }
    cur.next = canon(std::move(cur.next));
    out.push_back(std::move(cur));
  }
};

}  // namespace

nba ltl_to_nba(const formula_ptr& f, const prop_table& props,
               size_t state_limit) {
  formula_ptr nf = to_nnf(f);

  // until subformulas in a fixed order for degeneralisation
  std::vector<formula_ptr> untils;
  for (auto& s : subformulas(nf))
    if (s->op == ltl_op::until) untils.push_back(s);
  const size_t m = untils.size();
  auto until_index = [&](const formula_ptr& u) {
    for (size_t i = 0; i < m; ++i)
      if (equal(untils[i], u)) return i;
    throw std::logic_error("unknown until");
  };

  // tableau states are obligation sets; NBA states are (set, counter)
  std::map<fset, uint32_t, fset_less> set_ids;
  std::vector<fset> sets;
  auto set_id = [&](const fset& s) {
    auto it = set_ids.find(s);
    if (it != set_ids.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(sets.size());
    sets.push_back(s);
    set_ids.emplace(s, id);
    return id;
  };

  nba out;
  std::map<std::pair<uint32_t, size_t>, uint32_t> nba_ids;
  std::vector<std::pair<uint32_t, size_t>> work;
  auto nba_id = [&](uint32_t set, size_t counter) {
    auto key = std::make_pair(set, counter);
    auto it = nba_ids.find(key);
    if (it != nba_ids.end()) return it->second;
    if (out.size() >= state_limit)
      throw nba_too_large("tableau exceeded the state bound");
    uint32_t id = out.add_state(counter == m);
    nba_ids.emplace(key, id);
    work.push_back(key);
    return id;
  };

  uint32_t init_set = set_id(canon({nf}));
  out.initial.push_back(nba_id(init_set, m == 0 ? 0 : 0));

  // memoized expansion per obligation set
  std::map<uint32_t, std::vector<branch>> expansions;
  auto expand_set = [&](uint32_t sid) -> const std::vector<branch>& {
    auto it = expansions.find(sid);
    if (it != expansions.end()) return it->second;
    expander ex{&props, {}};
    ex.expand({sets[sid].begin(), sets[sid].end()}, branch{});
    // deduplicate identical branches
    auto& bs = ex.out;
    std::sort(bs.begin(), bs.end(), [](const branch& a, const branch& b) {
      if (a.pos != b.pos) return a.pos < b.pos;
      if (a.neg != b.neg) return a.neg < b.neg;
      return fset_less{}(a.next, b.next);
    });
    return expansions.emplace(sid, std::move(bs)).first->second;
  };

  while (!work.empty()) {
    auto [sid, counter] = work.back();
    work.pop_back();
    uint32_t src = nba_ids.at({sid, counter});
    for (auto& b : expand_set(sid)) {
      uint32_t dst_set = set_id(b.next);
      // advance the degeneralisation counter past satisfied untils:
      // until u is satisfied on this move if its promise was fulfilled
      // or no obligation on u remains in the successor
      size_t c = counter == m ? 0 : counter;
      auto satisfied = [&](size_t i) {
        for (auto& u : b.fulfilled)
          if (equal(u, untils[i])) return true;
        for (auto& n : b.next)
          if (equal(n, untils[i])) return false;
        return true;
      };
      while (c < m && satisfied(c)) ++c;
      uint32_t dst = nba_id(dst_set, c);
      out.edges[src].push_back({b.pos, b.neg, dst});
    }
  }
  return out;
}

bool eval_ltl_lasso(const formula_ptr& f, const std::vector<letter>& prefix,
                    const std::vector<letter>& loop, const prop_table& props) {
  if (loop.empty()) throw std::invalid_argument("empty lasso loop");
  formula_ptr nf = to_nnf(f);
  const size_t p = prefix.size(), n = p + loop.size();
  auto at = [&](size_t i) { return i < p ? prefix[i] : loop[i - p]; };
  auto succ = [&](size_t i) { return i + 1 < n ? i + 1 : p; };

  std::map<const formula*, std::vector<char>> val;
  std::function<const std::vector<char>&(const formula_ptr&)> ev =
      [&](const formula_ptr& g) -> const std::vector<char>& {
    auto it = val.find(g.get());
    if (it != val.end()) return it->second;
    std::vector<char> v(n, 0);
    switch (g->op) {
      case ltl_op::tt:
        v.assign(n, 1);
        break;
      case ltl_op::ff:
        break;
      case ltl_op::prop: {
        letter b = props.bit(g->prop);
        for (size_t i = 0; i < n; ++i) v[i] = (at(i) & b) != 0;
        break;
      }
      case ltl_op::not_: {
        auto& k = ev(g->kids[0]);
        for (size_t i = 0; i < n; ++i) v[i] = !k[i];
        break;
      }
      case ltl_op::and_: {
        v.assign(n, 1);
        for (auto& kf : g->kids) {
          auto& k = ev(kf);
          for (size_t i = 0; i < n; ++i) v[i] = v[i] && k[i];
        }
        break;
      }
      case ltl_op::or_: {
        for (auto& kf : g->kids) {
          auto& k = ev(kf);
          for (size_t i = 0; i < n; ++i) v[i] = v[i] || k[i];
        }
        break;
      }
      case ltl_op::next: {
        auto& k = ev(g->kids[0]);
        for (size_t i = 0; i < n; ++i) v[i] = k[succ(i)];
        break;
      }
      case ltl_op::until: {
        auto& a = ev(g->kids[0]);
        auto& b = ev(g->kids[1]);
        // least fixpoint: iterate until stable (loop length + 1 passes)
        for (size_t pass = 0; pass <= loop.size() + 1; ++pass) {
          bool changed = false;
          for (size_t ii = n; ii-- > 0;) {
            char nv = b[ii] || (a[ii] && v[succ(ii)]);
            if (nv != v[ii]) {
              v[ii] = nv;
              changed = true;
            }
          }
          if (!changed) break;
        }
        break;
      }
      case ltl_op::release: {
        auto& a = ev(g->kids[0]);
        auto& b = ev(g->kids[1]);
        v.assign(n, 1);  // greatest fixpoint
        for (size_t pass = 0; pass <= loop.size() + 1; ++pass) {
          bool changed = false;
          for (size_t ii = n; ii-- > 0;) {
            char nv = b[ii] && (a[ii] || v[succ(ii)]);
            if (nv != v[ii]) {
              v[ii] = nv;
              changed = true;
            }
          }
          if (!changed) break;
        }
        break;
      }
      default:
        throw std::logic_error("eval_ltl_lasso: not in NNF");
    }
    return val.emplace(g.get(), std::move(v)).first->second;
  };
  return ev(nf)[0] != 0;
}

bool nba_accepts_lasso(const nba& a, const std::vector<letter>& prefix,
                       const std::vector<letter>& loop) {
  if (loop.empty()) throw std::invalid_argument("empty lasso loop");
  const size_t p = prefix.size(), n = p + loop.size();
  auto at = [&](size_t i) { return i < p ? prefix[i] : loop[i - p]; };
  auto succ = [&](size_t i) { return i + 1 < n ? i + 1 : p; };

  // product positions (state, word index); search for a reachable cycle
  // through an accepting product node within the loop part
  std::set<std::pair<uint32_t, size_t>> reach;
  std::vector<std::pair<uint32_t, size_t>> stack;
  for (auto s : a.initial) {
    reach.insert({s, 0});
    stack.push_back({s, 0});
  }
  while (!stack.empty()) {
    auto [s, i] = stack.back();
    stack.pop_back();
    for (auto& e : a.edges[s])
      if (e.matches(at(i)) && reach.insert({e.dst, succ(i)}).second)
        stack.push_back({e.dst, succ(i)});
  }
  // from each reachable accepting node in the loop, look for a cycle back
  for (auto& [s0, i0] : reach) {
    if (i0 < p || !a.accepting[s0]) continue;
    std::set<std::pair<uint32_t, size_t>> seen{{s0, i0}};
    std::vector<std::pair<uint32_t, size_t>> st{{s0, i0}};
    while (!st.empty()) {
      auto [s, i] = st.back();
      st.pop_back();
      for (auto& e : a.edges[s]) {
        if (!e.matches(at(i))) continue;
        auto nxt = std::make_pair(e.dst, succ(i));
        if (nxt == std::make_pair(s0, i0)) return true;
        if (seen.insert(nxt).second) st.push_back(nxt);
      }
    }
  }
  return false;
}

}  // namespace isynt
