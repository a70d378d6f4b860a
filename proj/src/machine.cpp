#include "isynt/machine.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace isynt {

bool strategy_machine::complete() const {
  const size_t nin = static_cast<size_t>(__builtin_popcountll(input_mask));
  for (auto& st : states) {
    std::set<letter> seen;
    for (auto& e : st.edges) {
      if ((e.input & ~input_mask) != 0) return false;
      if (!seen.insert(e.input).second) return false;  // duplicate input
    }
    if (!st.otherwise && seen.size() != (size_t{1} << nin)) return false;
  }
  return true;
}

void strategy_machine::reduce() {
  // partition refinement on (output, edge signature)
  std::vector<uint32_t> cls(states.size(), 0);
  if (kind == kind_t::moore) {
    std::map<letter, uint32_t> by_out;
    for (size_t i = 0; i < states.size(); ++i) {
      auto [it, fresh] =
          by_out.emplace(states[i].output, static_cast<uint32_t>(by_out.size()));
      cls[i] = it->second;
    }
  }
  for (;;) {
    std::map<std::string, uint32_t> sig_ids;
    std::vector<uint32_t> next(states.size());
    for (size_t i = 0; i < states.size(); ++i) {
      std::ostringstream sig;
      sig << cls[i] << "#";
      auto add = [&](const edge& e, bool has_input) {
        sig << (has_input ? std::to_string(e.input) : "*") << ":" << e.output
            << ">" << cls[e.next] << ";";
      };
      auto sorted = states[i].edges;
      std::sort(sorted.begin(), sorted.end(),
                [](const edge& a, const edge& b) { return a.input < b.input; });
      for (auto& e : sorted) add(e, true);
      if (states[i].otherwise) add(*states[i].otherwise, false);
      auto [it, fresh] =
          sig_ids.emplace(sig.str(), static_cast<uint32_t>(sig_ids.size()));
      next[i] = it->second;
    }
    if (next == cls) break;
    cls = next;
  }
  uint32_t ncls = *std::max_element(cls.begin(), cls.end()) + 1;
  if (ncls == states.size()) return;
  // representative per class, remap
  std::vector<uint32_t> rep(ncls, UINT32_MAX);
  for (size_t i = 0; i < states.size(); ++i)
    if (rep[cls[i]] == UINT32_MAX) rep[cls[i]] = static_cast<uint32_t>(i);
  std::vector<state> merged(ncls);
  for (uint32_t c = 0; c < ncls; ++c) {
    merged[c] = states[rep[c]];
    for (auto& e : merged[c].edges) e.next = cls[e.next];
    if (merged[c].otherwise) merged[c].otherwise->next = cls[merged[c].otherwise->next];
  }
  states = std::move(merged);
  initial = cls[initial];
}

namespace {

std::string letter_str(const strategy_machine& m, letter l, letter mask) {
  std::string s;
  for (size_t i = 0; i < m.props.size(); ++i) {
    letter b = letter{1} << i;
    if (!(mask & b)) continue;
    if (!s.empty()) s += " & ";
    if (!(l & b)) s += "!";
    s += m.props.names[i];
  }
  return s.empty() ? "true" : s;
}

}  // namespace

std::string export_dot(const strategy_machine& m) {
  std::ostringstream os;
  os << "digraph strategy {\n  rankdir=LR;\n  init [shape=point];\n";
  for (size_t i = 0; i < m.states.size(); ++i) {
    os << "  s" << i << " [shape=circle,label=\"s" << i;
    if (m.kind == strategy_machine::kind_t::moore)
      os << "\\n" << letter_str(m, m.states[i].output, m.output_mask);
    os << "\"];\n";
  }
  os << "  init -> s" << m.initial << ";\n";
  for (size_t i = 0; i < m.states.size(); ++i) {
    for (auto& e : m.states[i].edges) {
      os << "  s" << i << " -> s" << e.next << " [label=\""
         << letter_str(m, e.input, m.input_mask);
      if (m.kind == strategy_machine::kind_t::mealy)
        os << " / " << letter_str(m, e.output, m.output_mask);
      os << "\"];\n";
    }
    if (m.states[i].otherwise) {
      auto& e = *m.states[i].otherwise;
      os << "  s" << i << " -> s" << e.next << " [label=\"otherwise";
      if (m.kind == strategy_machine::kind_t::mealy)
        os << " / " << letter_str(m, e.output, m.output_mask);
      os << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::string export_json(const strategy_machine& m) {
  nlohmann::json j;
  j["kind"] = m.kind == strategy_machine::kind_t::mealy ? "mealy" : "moore";
  j["props"] = m.props.names;
  j["initial"] = m.initial;
  std::vector<std::string> ins, outs;
  for (size_t i = 0; i < m.props.size(); ++i) {
    letter b = letter{1} << i;
    if (m.input_mask & b) ins.push_back(m.props.names[i]);
    if (m.output_mask & b) outs.push_back(m.props.names[i]);
  }
  j["inputs"] = ins;
  j["outputs"] = outs;
  nlohmann::json states = nlohmann::json::array();
  for (auto& st : m.states) {
    nlohmann::json s;
    s["output"] = st.output;
    nlohmann::json edges = nlohmann::json::array();
    for (auto& e : st.edges)
      edges.push_back({{"input", e.input}, {"output", e.output},
                       {"next", e.next}});
    s["edges"] = edges;
    if (st.otherwise)
      s["otherwise"] = {{"output", st.otherwise->output},
                        {"next", st.otherwise->next}};
    states.push_back(s);
  }
  j["states"] = states;
  return j.dump(2);
}

strategy_machine import_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  strategy_machine m;
  m.kind = j.at("kind") == "mealy" ? strategy_machine::kind_t::mealy
                                   : strategy_machine::kind_t::moore;
  for (auto& n : j.at("props")) m.props.add(n.get<std::string>());
  for (auto& n : j.at("inputs"))
    m.input_mask |= m.props.bit(n.get<std::string>());
  for (auto& n : j.at("outputs"))
    m.output_mask |= m.props.bit(n.get<std::string>());
  m.initial = j.at("initial").get<uint32_t>();
  for (auto& s : j.at("states")) {
    strategy_machine::state st;
    st.output = s.at("output").get<letter>();
    for (auto& e : s.at("edges"))
      st.edges.push_back({e.at("input").get<letter>(),
                          e.at("output").get<letter>(),
                          e.at("next").get<uint32_t>()});
    if (s.contains("otherwise"))
      st.otherwise = strategy_machine::edge{
          0, s.at("otherwise").at("output").get<letter>(),
          s.at("otherwise").at("next").get<uint32_t>()};
    m.states.push_back(std::move(st));
  }
  return m;
}

}  // namespace isynt
