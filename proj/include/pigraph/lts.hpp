#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "pigraph/engine.hpp"

namespace pigraph {

inline constexpr std::size_t default_max_states = 100000;

template <class L>
struct BasicTransition {
  std::size_t source = 0;
  L label;
  std::size_t target = 0;

  friend bool operator==(const BasicTransition&, const BasicTransition&) = default;
};

/// Finite state space of a model.  States are numbered in BFS order with the
/// initial state at index 0; transitions are sorted (source, label, target).
struct Lts {
  std::vector<StateKey> keys;
  std::vector<Configuration> states;
  std::size_t initial = 0;
  std::vector<BasicTransition<Label>> transitions;
  bool truncated = false;
  ClockModel clock_model = ClockModel::Causal;
  GcMode gc_mode = GcMode::Step;

  std::size_t state_count() const { return states.size(); }

  std::optional<std::size_t> find(const StateKey& key) const {
    const auto it = std::find(keys.begin(), keys.end(), key);
    if (it == keys.end()) return std::nullopt;
    return static_cast<std::size_t>(it - keys.begin());
  }
};

/// The exported view of an Lts: what `export_json` writes and reads back.
/// Also handy for hand-written reference systems.
struct LtsSummary {
  std::vector<StateKey> keys;
  std::vector<std::string> terms;
  std::vector<nlohmann::json> clocks;
  std::size_t initial = 0;
  std::vector<BasicTransition<std::string>> transitions;
  bool truncated = false;
  std::string clock_model;
  std::string gc_mode;

  std::size_t state_count() const { return keys.size(); }

  friend bool operator==(const LtsSummary&, const LtsSummary&) = default;
};

inline const std::string& label_text(const std::string& s) { return s; }
inline std::string label_text(const Label& l) { return l.str(); }

struct LtsOptions {
  std::size_t max_states = default_max_states;
  GcMode gc = GcMode::Step;
};

/// Breadth-first construction of the ε-abstracted transition system.
///
/// Stops early (truncated = true) once `max_states` states exist; transitions
/// to states that could not be added are dropped.
inline Lts build_lts(const Configuration& initial, LtsOptions opts = {}) {
  Lts lts;
  lts.clock_model = model_of(initial.clock);
  lts.gc_mode = lts.clock_model == ClockModel::Logical ? GcMode::Off : opts.gc;
  const EngineOptions engine{lts.gc_mode, 0};

  std::unordered_map<StateKey, std::size_t> index;
  const auto add = [&](Configuration c) -> std::optional<std::size_t> {
    auto key = state_key(c);
    if (const auto it = index.find(key); it != index.end()) return it->second;
    if (lts.states.size() >= opts.max_states) {
      lts.truncated = true;
      return std::nullopt;
    }
    const auto id = lts.states.size();
    index.emplace(key, id);
    lts.keys.push_back(std::move(key));
    lts.states.push_back(std::move(c));
    return id;
  };

  add(lts.gc_mode == GcMode::Off ? initial : gc(initial));
  for (std::size_t next = 0; next < lts.states.size(); ++next) {
    auto steps = observable_steps(lts.states[next], engine);
    // Fixed expansion order keeps numbering independent of rule enumeration.
    std::vector<std::pair<std::string, Step*>> ordered;
    for (auto& s : steps) ordered.emplace_back(s.label.str() + "\n" + state_key(s.target), &s);
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [_, step] : ordered) {
      const auto target = add(std::move(step->target));
      if (!target) continue;
      lts.transitions.push_back({next, step->label, *target});
    }
  }
  std::sort(lts.transitions.begin(), lts.transitions.end(), [](const auto& a, const auto& b) {
    return std::tie(a.source, a.label, a.target) < std::tie(b.source, b.label, b.target);
  });
  lts.transitions.erase(std::unique(lts.transitions.begin(), lts.transitions.end()),
                        lts.transitions.end());
  return lts;
}

inline LtsSummary summarize(const Lts& lts) {
  LtsSummary s;
  s.keys = lts.keys;
  for (const auto& c : lts.states) {
    s.terms.push_back(render(c));
    s.clocks.push_back(clock_to_json(c.clock));
  }
  s.initial = lts.initial;
  for (const auto& t : lts.transitions) s.transitions.push_back({t.source, t.label.str(), t.target});
  s.truncated = lts.truncated;
  s.clock_model = to_string(lts.clock_model);
  s.gc_mode = to_string(lts.gc_mode);
  return s;
}

namespace detail {
inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}
}  // namespace detail

/// Graphviz digraph; states `s0..sn` in BFS order, the initial one doubled.
template <class L>
std::string export_dot(const std::vector<BasicTransition<L>>& transitions, std::size_t states,
                       std::size_t initial) {
  std::string out = "digraph lts {\n  rankdir=LR;\n";
  for (std::size_t i = 0; i < states; ++i) {
    out += "  s" + std::to_string(i) + " [shape=" +
           (i == initial ? "doublecircle" : "circle") + "];\n";
  }
  for (const auto& t : transitions) {
    out += "  s" + std::to_string(t.source) + " -> s" + std::to_string(t.target) + " [label=\"" +
           detail::dot_escape(label_text(t.label)) + "\"];\n";
  }
  out += "}\n";
  return out;
}

inline std::string export_dot(const Lts& lts) {
  return export_dot(lts.transitions, lts.state_count(), lts.initial);
}

inline nlohmann::json to_json(const LtsSummary& s) {
  nlohmann::json j;
  j["clock_model"] = s.clock_model;
  j["gc_mode"] = s.gc_mode;
  j["truncated"] = s.truncated;
  j["initial"] = "s" + std::to_string(s.initial);
  auto states = nlohmann::json::array();
  for (std::size_t i = 0; i < s.keys.size(); ++i) {
    states.push_back({{"id", "s" + std::to_string(i)},
                      {"key", s.keys[i]},
                      {"term", s.terms[i]},
                      {"clock", s.clocks[i]}});
  }
  j["states"] = std::move(states);
  auto transitions = nlohmann::json::array();
  for (const auto& t : s.transitions) {
    transitions.push_back({{"source", "s" + std::to_string(t.source)},
                           {"label", t.label},
                           {"target", "s" + std::to_string(t.target)}});
  }
  j["transitions"] = std::move(transitions);
  return j;
}

inline std::string export_json(const Lts& lts) { return to_json(summarize(lts)).dump(2) + "\n"; }

inline LtsSummary lts_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const auto state_id = [](const nlohmann::json& v) {
    const auto s = v.get<std::string>();
    if (s.size() < 2 || s[0] != 's') throw std::invalid_argument("bad state id: " + s);
    return static_cast<std::size_t>(std::stoul(s.substr(1)));
  };
  LtsSummary s;
  s.clock_model = j.at("clock_model").get<std::string>();
  s.gc_mode = j.at("gc_mode").get<std::string>();
  s.truncated = j.at("truncated").get<bool>();
  s.initial = state_id(j.at("initial"));
  for (const auto& st : j.at("states")) {
    if (state_id(st.at("id")) != s.keys.size()) throw std::invalid_argument("states out of order");
    s.keys.push_back(st.at("key").get<std::string>());
    s.terms.push_back(st.at("term").get<std::string>());
    s.clocks.push_back(st.at("clock"));
  }
  for (const auto& t : j.at("transitions")) {
    s.transitions.push_back(
        {state_id(t.at("source")), t.at("label").get<std::string>(), state_id(t.at("target"))});
  }
  return s;
}

}  // namespace pigraph
