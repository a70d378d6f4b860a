#pragma once

#include <cstdint>

#include "isynt/ltl.hpp"

namespace isynt {

/// A letter is a truth assignment to the proposition table, one bit each.
using letter = uint64_t;

struct prop_table {
  std::vector<std::string> names;
  std::map<std::string, int> index;

  int add(const std::string& n) {
    auto it = index.find(n);
    if (it != index.end()) return it->second;
    if (names.size() >= 62) throw std::runtime_error("proposition overflow");
    int i = static_cast<int>(names.size());
    names.push_back(n);
    index.emplace(n, i);
    return i;
  }
  int find(const std::string& n) const {
    auto it = index.find(n);
    return it == index.end() ? -1 : it->second;
  }
  letter bit(const std::string& n) const {
    int i = find(n);
    if (i < 0) throw std::out_of_range("undeclared proposition " + n);
    return letter{1} << i;
  }
  size_t size() const { return names.size(); }
};

/// Nondeterministic Buechi automaton with conjunctive edge guards:
/// an edge fires on letters containing all of pos and none of neg.
struct nba {
  struct edge {
    letter pos = 0, neg = 0;
    uint32_t dst = 0;
    bool matches(letter l) const {
      return (l & pos) == pos && (l & neg) == 0;
    }
  };
  std::vector<std::vector<edge>> edges;  // indexed by source state
  std::vector<uint32_t> initial;
  std::vector<bool> accepting;

  size_t size() const { return edges.size(); }
  uint32_t add_state(bool acc) {
    edges.emplace_back();
    accepting.push_back(acc);
    return static_cast<uint32_t>(edges.size() - 1);
  }
};

struct nba_too_large : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Tableau construction. The formula is brought to negation normal form
/// internally; atoms must be propositions from the table. Throws
/// nba_too_large past the state bound.
nba ltl_to_nba(const formula_ptr& f, const prop_table& props,
               size_t state_limit = 200000);

/// Semantic LTL evaluation on the ultimately periodic word prefix loop^w.
/// The independent oracle behind the automaton and backend tests.
bool eval_ltl_lasso(const formula_ptr& f, const std::vector<letter>& prefix,
                    const std::vector<letter>& loop, const prop_table& props);

/// Does the automaton accept prefix loop^w? (explicit product walk)
bool nba_accepts_lasso(const nba& a, const std::vector<letter>& prefix,
                       const std::vector<letter>& loop);

}  // namespace isynt
