#include "isynt/lia.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace isynt {

lin_constraint constraint_of(const predicate& p) {
  if (p.is_negated()) return {-p.term(), -p.bound() - 1, constraint_sense::leq};
  return {p.term(), p.bound(), constraint_sense::leq};
}

namespace {

struct bound_origin {
  int input = -1;    // index into the caller's constraint list
  int branch = -1;   // index into the branch-bound path
  bool flipped = false;  // >= side of an equality
};

// One internal <= row: term <= bound, tracked back to its origin.
struct row_source {
  lin_term term;
  rational bound;
  bound_origin origin;
};

// Dutertre/de Moura style general simplex over exact rationals.
// Problem variables are unbounded unless branch bounds are given; every
// constraint row gets a slack variable carrying the row's bound.
class simplex {
 public:
  simplex(const std::vector<row_source>& rows,
          const std::vector<std::string>& vars, long* pivot_budget)
      : budget_(pivot_budget) {
    for (auto& v : vars) var_index_[v] = static_cast<int>(names_.size()),
                         names_.push_back(v);
    nproblem_ = static_cast<int>(names_.size());
    int n = nproblem_ + static_cast<int>(rows.size());
    lo_.resize(n);
    hi_.resize(n);
    lo_origin_.resize(n);
    hi_origin_.resize(n);
    beta_.assign(n, rational(0));
    for (auto& r : rows) {
      int s = static_cast<int>(names_.size());
      names_.push_back("$s" + std::to_string(s));
      std::map<int, rational> row;
      for (auto& [v, c] : r.term.coeffs()) row[var_index_.at(v)] = rational(c);
      rows_[s] = std::move(row);
      set_upper(s, r.bound - rational(r.term.constant()), r.origin);
      recompute(s);
    }
  }

  void set_upper(int v, const rational& b, bound_origin o) {
    if (!hi_[v] || b < *hi_[v]) {
      hi_[v] = b;
      hi_origin_[v] = o;
    }
  }
  void set_lower(int v, const rational& b, bound_origin o) {
    if (!lo_[v] || b > *lo_[v]) {
      lo_[v] = b;
      lo_origin_[v] = o;
    }
  }
  int index_of(const std::string& v) const { return var_index_.at(v); }

  // nonbasic variables must sit within their bounds before checking
  void clamp_nonbasic() {
    for (int v = 0; v < static_cast<int>(names_.size()); ++v) {
      if (rows_.count(v)) continue;
      rational old = beta_[v];
      if (lo_[v] && beta_[v] < *lo_[v]) beta_[v] = *lo_[v];
      if (hi_[v] && beta_[v] > *hi_[v]) beta_[v] = *hi_[v];
      if (beta_[v] != old) update_basics(v, beta_[v] - old);
    }
  }

  struct conflict {
    std::vector<std::pair<bound_origin, rational>> parts;  // origin, multiplier
  };

  // true = feasible; false with conflict filled = infeasible
  bool check(conflict& out) {
    clamp_nonbasic();
    for (;;) {
      if (budget_ && --*budget_ < 0) throw budget_exhausted{};
      int xi = -1;
      bool below = false;
      for (auto& [b, row] : rows_) {
        if (lo_[b] && beta_[b] < *lo_[b]) {
          xi = b;
          below = true;
          break;
        }
        if (hi_[b] && beta_[b] > *hi_[b]) {
          xi = b;
          below = false;
          break;
        }
      }
      if (xi < 0) return true;
      auto& row = rows_[xi];
      int xj = -1;
      for (auto& [v, a] : row) {
        if (a == 0) continue;
        bool can;
        if (below)
          can = (a > 0) ? (!hi_[v] || beta_[v] < *hi_[v])
                        : (!lo_[v] || beta_[v] > *lo_[v]);
        else
          can = (a > 0) ? (!lo_[v] || beta_[v] > *lo_[v])
                        : (!hi_[v] || beta_[v] < *hi_[v]);
        if (can) {
          xj = v;
          break;
        }
      }
      if (xj < 0) {
        // all suitable columns blocked: Farkas conflict from this row
        out.parts.clear();
        if (below) {
          out.parts.push_back({lo_origin_[xi], rational(1)});
          for (auto& [v, a] : row) {
            if (a == 0) continue;
            if (a > 0)
              out.parts.push_back({hi_origin_[v], a});
            else
              out.parts.push_back({lo_origin_[v], -a});
          }
        } else {
          out.parts.push_back({hi_origin_[xi], rational(1)});
          for (auto& [v, a] : row) {
            if (a == 0) continue;
            if (a > 0)
              out.parts.push_back({lo_origin_[v], a});
            else
              out.parts.push_back({hi_origin_[v], -a});
          }
        }
        return false;
      }
      pivot(xi, xj, below ? *lo_[xi] : *hi_[xi]);
    }
  }

  rational value(int v) const { return beta_[v]; }
  bool is_basic(int v) const { return rows_.count(v) != 0; }
  int nproblem() const { return nproblem_; }

  struct budget_exhausted {};

 private:
  void update_basics(int nb, const rational& delta) {
    for (auto& [b, row] : rows_) {
      auto it = row.find(nb);
      if (it != row.end()) beta_[b] += it->second * delta;
    }
  }

  void recompute(int b) {
    rational v(0);
    for (auto& [nb, c] : rows_[b]) v += c * beta_[nb];
    beta_[b] = v;
  }

  // make xi nonbasic at value target, xj basic
  void pivot(int xi, int xj, const rational& target) {
    auto row = rows_[xi];
    rows_.erase(xi);
    rational aij = row[xj];
    // xj = (xi - sum_{k!=j} a_ik x_k) / a_ij
    std::map<int, rational> jrow;
    jrow[xi] = rational(1) / aij;
    for (auto& [k, a] : row) {
      if (k == xj || a == 0) continue;
      jrow[k] = -a / aij;
    }
    // substitute into all other rows
    for (auto& [b, r] : rows_) {
      auto it = r.find(xj);
      if (it == r.end() || it->second == 0) continue;
      rational c = it->second;
      r.erase(it);
      for (auto& [k, a] : jrow) {
        r[k] += c * a;
        if (r[k] == 0) r.erase(k);
      }
    }
    rows_[xj] = std::move(jrow);
    // assignment update: move xi to target, recompute xj then dependents
    rational theta = (target - beta_[xi]) / aij;
    beta_[xi] = target;
    beta_[xj] += theta;
    for (auto& [b, r] : rows_) recompute(b);
  }

  std::map<std::string, int> var_index_;
  std::vector<std::string> names_;
  int nproblem_ = 0;
  std::vector<std::optional<rational>> lo_, hi_;
  std::vector<bound_origin> lo_origin_, hi_origin_;
  std::vector<rational> beta_;
  std::map<int, std::map<int, rational>> rows_;
  long* budget_;
};

std::vector<std::string> variables_of(const std::vector<lin_constraint>& cs) {
  std::set<std::string> vs;
  for (auto& c : cs)
    for (auto& [v, k] : c.term.coeffs()) vs.insert(v);
  return {vs.begin(), vs.end()};
}

struct bb_state {
  const std::vector<lin_constraint>* inputs;
  std::vector<std::string> vars;
  std::vector<farkas_certificate::branch_bound> path;
  long pivots;
  long nodes;
  int depth_limit;
};

std::vector<row_source> make_rows(const bb_state& st) {
  std::vector<row_source> rows;
  int i = 0;
  for (auto& c : *st.inputs) {
    rows.push_back({c.term, rational(c.bound), {i, -1, false}});
    if (c.sense == constraint_sense::eq)
      rows.push_back({-c.term, rational(-c.bound), {i, -1, true}});
    ++i;
  }
  return rows;
}

using node_ptr = std::unique_ptr<farkas_certificate::node>;

// candidate integer point satisfies all inputs and the branch path?
bool point_feasible(const bb_state& st, const valuation& v) {
  for (auto& c : *st.inputs) {
    i64 x = c.term.eval(v);
    if (c.sense == constraint_sense::eq ? x != c.bound : x > c.bound)
      return false;
  }
  for (auto& b : st.path) {
    i64 x = v.at(b.var);
    if (b.upper ? x > b.bound : x < b.bound) return false;
  }
  return true;
}

std::variant<valuation, node_ptr, lia_unknown> solve_rec(bb_state& st,
                                                         int depth) {
  if (depth > st.depth_limit)
    return lia_unknown{"branch depth limit exceeded"};
  if (--st.nodes < 0) return lia_unknown{"node limit exceeded"};
  simplex sx(make_rows(st), st.vars, &st.pivots);
  for (size_t b = 0; b < st.path.size(); ++b) {
    int v = sx.index_of(st.path[b].var);
    if (st.path[b].upper)
      sx.set_upper(v, rational(st.path[b].bound),
                   {-1, static_cast<int>(b), false});
    else
      sx.set_lower(v, rational(st.path[b].bound),
                   {-1, static_cast<int>(b), false});
  }
  simplex::conflict conf;
  bool feasible;
  try {
    feasible = sx.check(conf);
  } catch (simplex::budget_exhausted&) {
    return lia_unknown{"pivot limit exceeded"};
  }
  if (!feasible) {
    auto leaf = std::make_unique<farkas_certificate::node>();
    for (auto& [o, m] : conf.parts)
      leaf->leaf.push_back({o.input, o.branch, o.flipped, m});
    return leaf;
  }
  // look for a fractional problem variable
  int frac = -1;
  for (int v = 0; v < sx.nproblem(); ++v) {
    if (boost::multiprecision::denominator(sx.value(v)) != 1) {
      frac = v;
      break;
    }
  }
  if (frac < 0) {
    valuation model;
    for (size_t v = 0; v < st.vars.size(); ++v) {
      bigint n = boost::multiprecision::numerator(sx.value(static_cast<int>(v)));
      if (n > std::numeric_limits<i64>::max() ||
          n < std::numeric_limits<i64>::min())
        return lia_unknown{"model value out of range"};
      model[st.vars[v]] = static_cast<i64>(n);
    }
    return model;
  }
  // cheap rounding pass often hits an integer point directly
  {
    auto try_round = [&](int mode) -> std::optional<valuation> {
      valuation v;
      for (size_t i = 0; i < st.vars.size(); ++i) {
        rational x = sx.value(static_cast<int>(i));
        bigint num = boost::multiprecision::numerator(x);
        bigint den = boost::multiprecision::denominator(x);
        bigint fl = num / den;
        if (fl * den != num && num < 0) fl -= 1;
        bigint cand = mode == 0 ? (2 * (num - fl * den) >= den ? fl + 1 : fl)
                                : (mode == 1 ? fl : fl + (den == 1 ? 0 : 1));
        if (cand > std::numeric_limits<i64>::max() ||
            cand < std::numeric_limits<i64>::min())
          return std::nullopt;
        v[st.vars[i]] = static_cast<i64>(cand);
      }
      if (point_feasible(st, v)) return v;
      return std::nullopt;
    };
    for (int mode = 0; mode < 3; ++mode)
      if (auto v = try_round(mode)) return *v;
  }

  rational x = sx.value(frac);
  bigint fl = boost::multiprecision::numerator(x) /
              boost::multiprecision::denominator(x);
  if (x < 0 && fl * boost::multiprecision::denominator(x) !=
                   boost::multiprecision::numerator(x))
    fl -= 1;  // floor for negatives
  if (fl > std::numeric_limits<i64>::max() - 1 ||
      fl < std::numeric_limits<i64>::min() + 1)
    return lia_unknown{"branch value out of range"};
  i64 split = static_cast<i64>(fl);
  const std::string& var = st.vars[frac];

  st.path.push_back({var, split, true});
  auto left = solve_rec(st, depth + 1);
  st.path.pop_back();
  if (std::holds_alternative<valuation>(left)) return left;

  st.path.push_back({var, split + 1, false});
  auto right = solve_rec(st, depth + 1);
  st.path.pop_back();
  if (std::holds_alternative<valuation>(right)) return right;

  // a witness may hide behind a diverging sibling, so unknown is only
  // reported after both branches were tried
  if (std::holds_alternative<lia_unknown>(left)) return left;
  if (std::holds_alternative<lia_unknown>(right)) return right;

  auto node = std::make_unique<farkas_certificate::node>();
  node->var = var;
  node->split = split;
  node->left = std::move(std::get<node_ptr>(left));
  node->right = std::move(std::get<node_ptr>(right));
  return node;
}

}  // namespace

lia_result lia_solver::solve(const std::vector<lin_constraint>& cs) {
  ++queries_;
  // equalities whose coefficient gcd does not divide the bound are integer
  // infeasible outright (rationally feasible, so simplex will not see it)
  for (size_t i = 0; i < cs.size(); ++i) {
    if (cs[i].sense != constraint_sense::eq) continue;
    i64 g = cs[i].term.content();
    i64 b = cs[i].bound - cs[i].term.constant();
    if (g > 1 && b % g != 0) {
      farkas_certificate cert;
      cert.root = std::make_unique<farkas_certificate::node>();
      cert.root->divisibility = true;
      cert.root->leaf.push_back({static_cast<int>(i), -1, false, rational(1)});
      return lia_unsat{std::move(cert)};
    }
  }
  bb_state st{&cs,          variables_of(cs),   {},
              lim_.pivot_limit, lim_.node_limit, lim_.branch_depth};
  auto r = solve_rec(st, 0);
  if (std::holds_alternative<valuation>(r))
    return lia_sat{std::move(std::get<valuation>(r))};
  if (std::holds_alternative<lia_unknown>(r))
    return std::get<lia_unknown>(r);
  farkas_certificate cert;
  cert.root = std::move(std::get<node_ptr>(r));
  return lia_unsat{std::move(cert)};
}

bool lia_solver::sat(const std::vector<lin_constraint>& cs) {
  auto r = solve(cs);
  if (is_unknown(r))
    throw std::runtime_error("lia solver: " + std::get<lia_unknown>(r).reason);
  return is_sat(r);
}

bool lia_solver::entails(const std::vector<lin_constraint>& cs,
                         const lin_term& t, i64 b) {
  auto q = cs;
  q.push_back({-t, -b - 1, constraint_sense::leq});
  auto r = solve(q);
  return is_unsat(r);
}

namespace {

bool replay(const std::vector<lin_constraint>& cs,
            const farkas_certificate::node& n,
            std::vector<farkas_certificate::branch_bound>& path) {
  if (n.is_leaf() && n.divisibility) {
    if (n.leaf.size() != 1 || n.leaf[0].input_index < 0) return false;
    const auto& c = cs[n.leaf[0].input_index];
    if (c.sense != constraint_sense::eq) return false;
    i64 g = c.term.content();
    i64 b = c.bound - c.term.constant();
    return g > 1 && b % g != 0;
  }
  if (n.is_leaf()) {
    std::map<std::string, rational> coeff_sum;
    rational bound_sum(0);
    for (auto& u : n.leaf) {
      if (u.multiplier < 0) return false;
      lin_term t;
      rational b;
      if (u.input_index >= 0) {
        if (u.input_index >= static_cast<int>(cs.size())) return false;
        const auto& c = cs[u.input_index];
        if (u.flipped && c.sense != constraint_sense::eq) return false;
        t = u.flipped ? -c.term : c.term;
        b = rational(u.flipped ? -c.bound : c.bound);
        b -= t.constant();
        t.set_constant(0);
      } else {
        if (u.branch_index < 0 ||
            u.branch_index >= static_cast<int>(path.size()))
          return false;
        auto& bb = path[u.branch_index];
        t = bb.upper ? lin_term::var(bb.var) : lin_term::var(bb.var, -1);
        b = rational(bb.upper ? bb.bound : -bb.bound);
      }
      for (auto& [v, c] : t.coeffs()) coeff_sum[v] += u.multiplier * c;
      bound_sum += u.multiplier * b;
    }
    for (auto& [v, c] : coeff_sum)
      if (c != 0) return false;
    return bound_sum < 0;
  }
  path.push_back({n.var, n.split, true});
  bool l = replay(cs, *n.left, path);
  path.pop_back();
  if (!l) return false;
  path.push_back({n.var, n.split + 1, false});
  bool r = replay(cs, *n.right, path);
  path.pop_back();
  return r;
}

}  // namespace

bool check_certificate(const std::vector<lin_constraint>& cs,
                       const farkas_certificate& cert) {
  if (!cert.root) return false;
  std::vector<farkas_certificate::branch_bound> path;
  return replay(cs, *cert.root, path);
}

namespace {

// integer tightening: divide by the coefficient gcd, floor the bound
std::optional<predicate> tightened_predicate(
    const std::map<std::string, rational>& coeffs, const rational& bound) {
  // scale to integers
  bigint den(1);
  for (auto& [v, c] : coeffs)
    den = boost::multiprecision::lcm(den,
                                     boost::multiprecision::denominator(c));
  den = boost::multiprecision::lcm(den,
                                   boost::multiprecision::denominator(bound));
  lin_term t;
  for (auto& [v, c] : coeffs) {
    bigint k = boost::multiprecision::numerator(c) *
               (den / boost::multiprecision::denominator(c));
    if (k > std::numeric_limits<i64>::max() ||
        k < std::numeric_limits<i64>::min())
      return std::nullopt;
    if (k != 0) t.set_coeff(v, static_cast<i64>(k));
  }
  rational scaled = bound * rational(den);
  bigint bnum = boost::multiprecision::numerator(scaled);
  bigint bden = boost::multiprecision::denominator(scaled);
  bigint fl = bnum / bden;
  if (fl * bden != bnum && ((bnum < 0) != (bden < 0))) fl -= 1;
  if (fl > std::numeric_limits<i64>::max() ||
      fl < std::numeric_limits<i64>::min())
    return std::nullopt;
  return predicate(t, static_cast<i64>(fl));
}

std::vector<lin_constraint> constraints_of_set(
    const std::vector<predicate>& ps) {
  std::vector<lin_constraint> cs;
  for (auto& p : ps) cs.push_back(constraint_of(p));
  return cs;
}

}  // namespace

interp_result sequence_interpolants(
    const std::vector<std::vector<lin_constraint>>& fs, lia_solver& solver) {
  if (fs.empty()) return std::vector<std::vector<predicate>>{};
  std::vector<lin_constraint> all;
  std::vector<size_t> group_start;  // first constraint index of each group
  for (auto& f : fs) {
    group_start.push_back(all.size());
    all.insert(all.end(), f.begin(), f.end());
  }
  auto res = solver.solve(all);
  if (is_sat(res))
    throw std::invalid_argument(
        "sequence_interpolants: path formula is satisfiable");
  if (is_unknown(res))
    return interp_failure{false, std::get<lia_unknown>(res).reason};
  const auto& cert = std::get<lia_unsat>(res).cert;
  if (!cert.root->is_leaf() || cert.root->divisibility)
    return interp_failure{
        true, "integer-infeasible but rationally feasible path"};

  const size_t k = fs.size() - 1;
  std::vector<std::vector<predicate>> interps;
  for (size_t cut = 1; cut <= k; ++cut) {
    // partial Farkas sum over constraints of f_0..f_{cut-1}
    std::map<std::string, rational> coeffs;
    rational bound(0);
    for (auto& u : cert.root->leaf) {
      if (u.input_index < 0 || static_cast<size_t>(u.input_index) >= group_start[cut])
        continue;
      const auto& c = all[u.input_index];
      lin_term t = u.flipped ? -c.term : c.term;
      rational b = rational(u.flipped ? -c.bound : c.bound) -
                   rational(t.constant());
      t.set_constant(0);
      for (auto& [v, co] : t.coeffs()) coeffs[v] += u.multiplier * co;
      bound += u.multiplier * b;
    }
    for (auto it = coeffs.begin(); it != coeffs.end();)
      it = it->second == 0 ? coeffs.erase(it) : std::next(it);
    auto p = tightened_predicate(coeffs, bound);
    if (!p) return interp_failure{false, "interpolant coefficient overflow"};
    std::vector<predicate> set;
    if (p->is_constant()) {
      if (!p->constant_value()) set.push_back(predicate::false_pred());
      // a true interpolant is the empty set
    } else {
      set.push_back(*p);
    }
    interps.push_back(std::move(set));
  }

  // machine-check the three interpolant conditions
  auto entailed = [&](std::vector<lin_constraint> lhs,
                      const std::vector<predicate>& rhs) {
    for (auto& p : rhs) {
      auto q = lhs;
      q.push_back(constraint_of(p.negated()));
      if (!is_unsat(solver.solve(q))) return false;
    }
    return true;
  };
  if (!entailed(fs[0], interps[0]))
    return interp_failure{false, "verification failed: f_0 => I_1"};
  for (size_t i = 1; i < k; ++i) {
    auto lhs = constraints_of_set(interps[i - 1]);
    lhs.insert(lhs.end(), fs[i].begin(), fs[i].end());
    if (!entailed(lhs, interps[i]))
      return interp_failure{false, "verification failed: I_i & f_i => I_i+1"};
  }
  auto last = constraints_of_set(interps[k - 1]);
  last.insert(last.end(), fs[k].begin(), fs[k].end());
  if (!is_unsat(solver.solve(last)))
    return interp_failure{false, "verification failed: I_k & f_k unsat"};
  return interps;
}

namespace {

// <= rows of a polyhedron, equalities expanded
std::vector<std::pair<lin_term, i64>> leq_rows(
    const std::vector<lin_constraint>& cs) {
  std::vector<std::pair<lin_term, i64>> rows;
  for (auto& c : cs) {
    lin_term t = c.term;
    i64 b = c.bound - t.constant();
    t.set_constant(0);
    rows.push_back({t, b});
    if (c.sense == constraint_sense::eq) rows.push_back({-t, -b});
  }
  return rows;
}

constexpr i64 kCoeffBox = 10;
constexpr i64 kMultBox = 48;

}  // namespace

std::optional<ranking_function> synth_linear_ranking(
    const std::vector<lin_constraint>& rel,
    const std::vector<lin_constraint>& guard_prev,
    const std::vector<predicate>& invariant, lia_solver& solver) {
  // loop body must be executable at all
  {
    auto body = rel;
    body.insert(body.end(), guard_prev.begin(), guard_prev.end());
    auto r = solver.solve(body);
    if (!is_sat(r)) return std::nullopt;
  }

  // template variables: one coefficient per current-state variable
  std::set<std::string> cur_vars;
  for (auto& c : rel)
    for (auto& [v, k] : c.term.coeffs()) cur_vars.insert(strip_prev(v));
  for (auto& c : guard_prev)
    for (auto& [v, k] : c.term.coeffs()) cur_vars.insert(strip_prev(v));
  if (cur_vars.empty()) return std::nullopt;

  auto p1 = leq_rows(rel);
  for (auto& r : leq_rows(guard_prev)) p1.push_back(r);
  auto p2 = leq_rows(guard_prev);  // renamed to current below

  std::vector<lin_constraint> sys;
  auto cvar = [](const std::string& v) { return "c$" + v; };
  auto box = [&](const std::string& v, i64 lo, i64 hi) {
    sys.push_back({lin_term::var(v), hi, constraint_sense::leq});
    sys.push_back({lin_term::var(v, -1), -lo, constraint_sense::leq});
  };
  for (auto& v : cur_vars) box(cvar(v), -kCoeffBox, kCoeffBox);
  box("b0$", -kMultBox, kMultBox);

  // decrease: guard & rel |= r_prev - r >= 1, i.e. d.z <= -1 where
  // d[v] = c_v and d[v@prev] = -c_v
  std::set<std::string> z1;
  for (auto& [t, b] : p1)
    for (auto& [v, k] : t.coeffs()) z1.insert(v);
  for (auto& v : cur_vars) {
    z1.insert(v);
    z1.insert(prev_var(v));
  }
  for (auto& z : z1) {
    lin_term eq;
    for (size_t i = 0; i < p1.size(); ++i)
      if (i64 c = p1[i].first.coeff(z))
        eq.set_coeff("lam$" + std::to_string(i), c);
    std::string base = strip_prev(z);
    if (cur_vars.count(base)) {
      // subtract the target coefficient
      i64 sign = is_prev_var(z) ? -1 : 1;
      eq.set_coeff(cvar(base), eq.coeff(cvar(base)) - sign);
    }
    sys.push_back(eq_constraint(eq, 0));
  }
  {
    lin_term bb;
    for (size_t i = 0; i < p1.size(); ++i)
      if (p1[i].second != 0)
        bb.set_coeff("lam$" + std::to_string(i), p1[i].second);
    sys.push_back({bb, -1, constraint_sense::leq});
    for (size_t i = 0; i < p1.size(); ++i)
      box("lam$" + std::to_string(i), 0, kMultBox);
  }

  // boundedness: guard (over current vars) |= r >= b0, i.e. -c.x <= -b0
  std::set<std::string> z2;
  std::vector<std::pair<lin_term, i64>> p2cur;
  for (auto& [t, b] : p2) {
    lin_term tc = t.rename([](const std::string& v) { return strip_prev(v); });
    p2cur.push_back({tc, b});
    for (auto& [v, k] : tc.coeffs()) z2.insert(v);
  }
  for (auto& v : cur_vars) z2.insert(v);
  for (auto& z : z2) {
    lin_term eq;
    for (size_t i = 0; i < p2cur.size(); ++i)
      if (i64 c = p2cur[i].first.coeff(z))
        eq.set_coeff("mu$" + std::to_string(i), c);
    if (cur_vars.count(z)) eq.set_coeff(cvar(z), eq.coeff(cvar(z)) + 1);
    sys.push_back(eq_constraint(eq, 0));
  }
  {
    lin_term bb;
    for (size_t i = 0; i < p2cur.size(); ++i)
      if (p2cur[i].second != 0)
        bb.set_coeff("mu$" + std::to_string(i), p2cur[i].second);
    bb.set_coeff("b0$", 1);
    sys.push_back({bb, 0, constraint_sense::leq});
    for (size_t i = 0; i < p2cur.size(); ++i)
      box("mu$" + std::to_string(i), 0, kMultBox);
  }

  auto res = solver.solve(sys);
  if (!is_sat(res)) return std::nullopt;
  const auto& m = std::get<lia_sat>(res).model;
  ranking_function rf;
  for (auto& v : cur_vars) {
    auto it = m.find(cvar(v));
    if (it != m.end() && it->second != 0) rf.term.set_coeff(v, it->second);
  }
  if (rf.term.coeffs().empty()) return std::nullopt;
  auto itb = m.find("b0$");
  rf.lower_bound = itb == m.end() ? 0 : itb->second;
  rf.invariant = invariant;
  if (!verify_ranking(rf, rel, guard_prev, solver)) return std::nullopt;
  return rf;
}

bool verify_ranking(const ranking_function& r,
                    const std::vector<lin_constraint>& rel,
                    const std::vector<lin_constraint>& guard_prev,
                    lia_solver& solver) {
  lin_term r_cur = r.term;
  lin_term r_prev = r.term.rename([](const std::string& v) {
    return prev_var(v);
  });
  // decrease fails iff guard & rel & r_prev - r <= 0 is satisfiable
  auto q1 = rel;
  q1.insert(q1.end(), guard_prev.begin(), guard_prev.end());
  q1.push_back({r_prev - r_cur, 0, constraint_sense::leq});
  auto d = solver.solve(q1);
  if (!is_unsat(d)) return false;
  // boundedness fails iff guard (current) & r <= b0 - 1 satisfiable
  std::vector<lin_constraint> q2;
  for (auto& c : guard_prev) {
    lin_constraint cc = c;
    cc.term = c.term.rename([](const std::string& v) { return strip_prev(v); });
    q2.push_back(cc);
  }
  q2.push_back({r_cur, r.lower_bound - 1, constraint_sense::leq});
  auto b = solver.solve(q2);
  return is_unsat(b);
}

}  // namespace isynt
