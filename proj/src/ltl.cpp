#include "isynt/ltl.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace isynt {

namespace {

size_t hash_combine(size_t h, size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

size_t hash_of(ltl_op op, const std::string& prop,
               const std::optional<predicate>& pred,
               const std::vector<formula_ptr>& kids) {
  size_t h = static_cast<size_t>(op) * 0x51ed270b;
  h = hash_combine(h, std::hash<std::string>{}(prop));
  if (pred) h = hash_combine(h, std::hash<std::string>{}(pred->str()));
  for (auto& k : kids) h = hash_combine(h, k->hash);
  return h;
}

formula_ptr make(ltl_op op, std::string prop, std::optional<predicate> pred,
                 std::vector<formula_ptr> kids) {
  auto f = std::make_shared<formula>();
  f->op = op;
  f->prop = std::move(prop);
  f->pred = std::move(pred);
  f->kids = std::move(kids);
  f->hash = hash_of(f->op, f->prop, f->pred, f->kids);
  return f;
}

}  // namespace

int compare(const formula_ptr& a, const formula_ptr& b) {
  if (a.get() == b.get()) return 0;
  if (a->op != b->op) return a->op < b->op ? -1 : 1;
  if (a->hash != b->hash) return a->hash < b->hash ? -1 : 1;
  if (int c = a->prop.compare(b->prop)) return c;
  if (a->pred.has_value() != b->pred.has_value())
    return a->pred.has_value() ? 1 : -1;
  if (a->pred && !(*a->pred == *b->pred)) return *a->pred < *b->pred ? -1 : 1;
  if (a->kids.size() != b->kids.size())
    return a->kids.size() < b->kids.size() ? -1 : 1;
  for (size_t i = 0; i < a->kids.size(); ++i)
    if (int c = compare(a->kids[i], b->kids[i])) return c;
  return 0;
}

bool equal(const formula_ptr& a, const formula_ptr& b) {
  return compare(a, b) == 0;
}

formula_ptr f_true() {
  static formula_ptr t = make(ltl_op::tt, "", std::nullopt, {});
  return t;
}
formula_ptr f_false() {
  static formula_ptr f = make(ltl_op::ff, "", std::nullopt, {});
  return f;
}
formula_ptr f_prop(const std::string& name) {
  return make(ltl_op::prop, name, std::nullopt, {});
}
formula_ptr f_pred(const predicate& p) {
  if (p.is_constant()) return p.constant_value() ? f_true() : f_false();
  if (p.is_negated()) return f_not(f_pred(p.atom()));
  return make(ltl_op::pred, "", p, {});
}

formula_ptr f_not(formula_ptr a) {
  if (a->op == ltl_op::tt) return f_false();
  if (a->op == ltl_op::ff) return f_true();
  if (a->op == ltl_op::not_) return a->kids[0];
  return make(ltl_op::not_, "", std::nullopt, {std::move(a)});
}

static formula_ptr nary(ltl_op op, std::vector<formula_ptr> kids) {
  const bool conj = op == ltl_op::and_;
  formula_ptr unit = conj ? f_true() : f_false();
  formula_ptr zero = conj ? f_false() : f_true();
  std::vector<formula_ptr> flat;
  for (auto& k : kids) {
    if (!k) throw std::logic_error("null formula child");
    if (k->op == op) {
      flat.insert(flat.end(), k->kids.begin(), k->kids.end());
    } else if (equal(k, zero)) {
      return zero;
    } else if (!equal(k, unit)) {
      flat.push_back(k);
    }
  }
  std::sort(flat.begin(), flat.end(),
            [](const formula_ptr& a, const formula_ptr& b) {
              return compare(a, b) < 0;
            });
  flat.erase(std::unique(flat.begin(), flat.end(),
                         [](const formula_ptr& a, const formula_ptr& b) {
                           return equal(a, b);
                         }),
             flat.end());
  // x and !x in one conjunction (or disjunction) collapses to a constant
  for (auto& k : flat) {
    if (k->op != ltl_op::not_) continue;
    for (auto& other : flat)
      if (equal(other, k->kids[0])) return zero;
  }
  if (flat.empty()) return unit;
  if (flat.size() == 1) return flat[0];
  return make(op, "", std::nullopt, std::move(flat));
}

formula_ptr f_and(std::vector<formula_ptr> kids) {
  return nary(ltl_op::and_, std::move(kids));
}
formula_ptr f_or(std::vector<formula_ptr> kids) {
  return nary(ltl_op::or_, std::move(kids));
}
formula_ptr f_and(formula_ptr a, formula_ptr b) {
  return f_and(std::vector<formula_ptr>{std::move(a), std::move(b)});
}
formula_ptr f_or(formula_ptr a, formula_ptr b) {
  return f_or(std::vector<formula_ptr>{std::move(a), std::move(b)});
}
formula_ptr f_implies(formula_ptr a, formula_ptr b) {
  if (a->op == ltl_op::tt) return b;
  if (a->op == ltl_op::ff) return f_true();
  if (b->op == ltl_op::tt) return f_true();
  return make(ltl_op::implies, "", std::nullopt, {std::move(a), std::move(b)});
}
formula_ptr f_iff(formula_ptr a, formula_ptr b) {
  if (equal(a, b)) return f_true();
  return make(ltl_op::iff, "", std::nullopt, {std::move(a), std::move(b)});
}
formula_ptr f_next(formula_ptr a) {
  if (a->op == ltl_op::tt || a->op == ltl_op::ff) return a;
  return make(ltl_op::next, "", std::nullopt, {std::move(a)});
}
formula_ptr f_until(formula_ptr a, formula_ptr b) {
  if (b->op == ltl_op::tt || b->op == ltl_op::ff) return b;
  if (a->op == ltl_op::ff) return b;
  return make(ltl_op::until, "", std::nullopt, {std::move(a), std::move(b)});
}
formula_ptr f_release(formula_ptr a, formula_ptr b) {
  if (b->op == ltl_op::tt || b->op == ltl_op::ff) return b;
  if (a->op == ltl_op::tt) return b;
  return make(ltl_op::release, "", std::nullopt, {std::move(a), std::move(b)});
}
formula_ptr f_weak_until(formula_ptr a, formula_ptr b) {
  return make(ltl_op::weak_until, "", std::nullopt,
              {std::move(a), std::move(b)});
}
formula_ptr f_eventually(formula_ptr a) {
  if (a->op == ltl_op::tt || a->op == ltl_op::ff) return a;
  if (a->op == ltl_op::eventually) return a;
  return make(ltl_op::eventually, "", std::nullopt, {std::move(a)});
}
formula_ptr f_globally(formula_ptr a) {
  if (a->op == ltl_op::tt || a->op == ltl_op::ff) return a;
  if (a->op == ltl_op::globally) return a;
  return make(ltl_op::globally, "", std::nullopt, {std::move(a)});
}

formula_ptr to_nnf(const formula_ptr& f, bool neg) {
  switch (f->op) {
    case ltl_op::tt:
      return neg ? f_false() : f_true();
    case ltl_op::ff:
      return neg ? f_true() : f_false();
    case ltl_op::prop:
    case ltl_op::pred:
      return neg ? f_not(f) : f;
    case ltl_op::not_:
      return to_nnf(f->kids[0], !neg);
    case ltl_op::and_:
    case ltl_op::or_: {
      std::vector<formula_ptr> kids;
      kids.reserve(f->kids.size());
      for (auto& k : f->kids) kids.push_back(to_nnf(k, neg));
      bool conj = (f->op == ltl_op::and_) != neg;
      return conj ? f_and(std::move(kids)) : f_or(std::move(kids));
    }
    case ltl_op::implies: {
      auto a = to_nnf(f->kids[0], !neg);
      auto b = to_nnf(f->kids[1], neg);
      return neg ? f_and(to_nnf(f->kids[0], false), b) : f_or(a, b);
    }
    case ltl_op::iff: {
      // (a&b)|(!a&!b), negated (a&!b)|(!a&b)
      auto a = f->kids[0], b = f->kids[1];
      auto pa = to_nnf(a, false), na = to_nnf(a, true);
      auto pb = to_nnf(b, neg), nb = to_nnf(b, !neg);
      return f_or(f_and(pa, pb), f_and(na, nb));
    }
    case ltl_op::next:
      return f_next(to_nnf(f->kids[0], neg));
    case ltl_op::until: {
      auto a = to_nnf(f->kids[0], neg);
      auto b = to_nnf(f->kids[1], neg);
      return neg ? f_release(a, b) : f_until(a, b);
    }
    case ltl_op::release: {
      auto a = to_nnf(f->kids[0], neg);
      auto b = to_nnf(f->kids[1], neg);
      return neg ? f_until(a, b) : f_release(a, b);
    }
    case ltl_op::weak_until: {
      // a W b == b R (a | b)
      auto a = f->kids[0], b = f->kids[1];
      return to_nnf(f_release(b, f_or(a, b)), neg);
    }
    case ltl_op::eventually:
      return neg ? f_release(f_false(), to_nnf(f->kids[0], true))
                 : f_until(f_true(), to_nnf(f->kids[0], false));
    case ltl_op::globally:
      return neg ? f_until(f_true(), to_nnf(f->kids[0], true))
                 : f_release(f_false(), to_nnf(f->kids[0], false));
  }
  throw std::logic_error("to_nnf: bad op");
}

static void collect_sub(const formula_ptr& f, std::vector<formula_ptr>& out,
                        std::set<const formula*>& seen) {
  if (!seen.insert(f.get()).second) return;
  for (auto& k : f->kids) collect_sub(k, out, seen);
  out.push_back(f);
}

std::vector<formula_ptr> subformulas(const formula_ptr& f) {
  std::vector<formula_ptr> out;
  std::set<const formula*> seen;
  collect_sub(f, out, seen);
  return out;
}

formula_ptr map_atoms(
    const formula_ptr& f,
    const std::function<formula_ptr(const formula&)>& fn) {
  if (f->op == ltl_op::prop || f->op == ltl_op::pred) {
    auto r = fn(*f);
    return r ? r : f;
  }
  std::vector<formula_ptr> kids;
  kids.reserve(f->kids.size());
  bool changed = false;
  for (auto& k : f->kids) {
    kids.push_back(map_atoms(k, fn));
    changed |= kids.back().get() != k.get();
  }
  if (!changed) return f;
  switch (f->op) {
    case ltl_op::not_:
      return f_not(kids[0]);
    case ltl_op::and_:
      return f_and(std::move(kids));
    case ltl_op::or_:
      return f_or(std::move(kids));
    case ltl_op::implies:
      return f_implies(kids[0], kids[1]);
    case ltl_op::iff:
      return f_iff(kids[0], kids[1]);
    case ltl_op::next:
      return f_next(kids[0]);
    case ltl_op::until:
      return f_until(kids[0], kids[1]);
    case ltl_op::release:
      return f_release(kids[0], kids[1]);
    case ltl_op::weak_until:
      return f_weak_until(kids[0], kids[1]);
    case ltl_op::eventually:
      return f_eventually(kids[0]);
    case ltl_op::globally:
      return f_globally(kids[0]);
    default:
      return f;
  }
}

std::vector<predicate> collect_predicates(const formula_ptr& f) {
  std::set<predicate> set;
  for (auto& s : subformulas(f))
    if (s->op == ltl_op::pred) set.insert(s->pred->atom());
  return {set.begin(), set.end()};
}

std::string lin_term::str() const {
  std::ostringstream os;
  bool first = true;
  for (auto& [v, c] : coeffs()) {
    if (c < 0)
      os << (first ? "-" : " - ");
    else if (!first)
      os << " + ";
    i64 a = c < 0 ? -c : c;
    if (a != 1) os << a << "*";
    os << v;
    first = false;
  }
  if (first) {
    os << constant();
  } else if (constant() > 0) {
    os << " + " << constant();
  } else if (constant() < 0) {
    os << " - " << -constant();
  }
  return os.str();
}

std::string predicate::str() const {
  std::ostringstream os;
  if (is_negated()) os << "!(";
  os << term_.str() << " <= " << bound_;
  if (is_negated()) os << ")";
  return os.str();
}

std::string formula::str() const {
  auto paren = [](const formula_ptr& k) {
    std::string s = k->str();
    if (k->kids.size() >= 2 || k->op == ltl_op::until ||
        k->op == ltl_op::release || k->op == ltl_op::weak_until)
      return "(" + s + ")";
    return s;
  };
  std::ostringstream os;
  switch (op) {
    case ltl_op::tt:
      return "true";
    case ltl_op::ff:
      return "false";
    case ltl_op::prop:
      return prop;
    case ltl_op::pred:
      return pred->str();
    case ltl_op::not_:
      return "!" + paren(kids[0]);
    case ltl_op::and_:
    case ltl_op::or_: {
      const char* sep = op == ltl_op::and_ ? " & " : " | ";
      for (size_t i = 0; i < kids.size(); ++i)
        os << (i ? sep : "") << paren(kids[i]);
      return os.str();
    }
    case ltl_op::implies:
      return paren(kids[0]) + " -> " + paren(kids[1]);
    case ltl_op::iff:
      return paren(kids[0]) + " <-> " + paren(kids[1]);
    case ltl_op::next:
      return "X " + paren(kids[0]);
    case ltl_op::until:
      return paren(kids[0]) + " U " + paren(kids[1]);
    case ltl_op::release:
      return paren(kids[0]) + " R " + paren(kids[1]);
    case ltl_op::weak_until:
      return paren(kids[0]) + " W " + paren(kids[1]);
    case ltl_op::eventually:
      return "F " + paren(kids[0]);
    case ltl_op::globally:
      return "G " + paren(kids[0]);
  }
  return "?";
}

}  // namespace isynt
