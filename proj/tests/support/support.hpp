#pragma once

// Shared test helpers: corpus access, invariant checkers and the brute-force
// bisimulation oracle.  None of this goes through the library's own
// refinement or closure code paths except where noted.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pigraph/pigraph.hpp"

namespace pigraph::testing {

inline std::filesystem::path models_dir() { return PIGRAPH_MODELS_DIR; }

inline std::string read_model(const std::string& name) {
  std::ifstream in(models_dir() / name);
  if (!in) throw std::runtime_error("missing model " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> corpus() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(models_dir()))
    if (e.path().extension() == ".pig") out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

inline Configuration load(const std::string& name, ClockModel clock = ClockModel::Causal) {
  return compile(parse(read_model(name)), clock);
}

inline Configuration compile_text(const std::string& src, ClockModel clock = ClockModel::Causal) {
  return compile(parse(src), clock);
}

/// Follows raw steps whose rule name matches, one at a time, failing loudly
/// if the step is not unique.
inline Configuration fire(const Configuration& c, const std::string& rule,
                          EngineOptions opts = {GcMode::Off, 0}) {
  const auto steps = raw_steps(c, opts);
  const Step* found = nullptr;
  for (const auto& s : steps) {
    if (s.rule != rule) continue;
    if (found) throw std::runtime_error("rule " + rule + " fires more than once");
    found = &s;
  }
  if (!found) throw std::runtime_error("rule " + rule + " not enabled in " + render(c));
  return found->target;
}

inline std::set<std::string> labels_of(const std::vector<Step>& steps) {
  std::set<std::string> out;
  for (const auto& s : steps) out.insert(s.label.str());
  return out;
}

// ---------------------------------------------------------------------------
// Invariants

/// No stored singleton, pairwise disjoint classes, only free/fresh names.
inline bool partition_well_formed(const Partition& p) {
  NameSet seen;
  for (const auto& c : p.classes()) {
    if (c.size() < 2) return false;
    for (const auto& n : c) {
      if (!n.is_partitionable()) return false;
      if (!seen.insert(n).second) return false;
    }
  }
  return true;
}

/// A class holding a fresh output has only fresh inputs besides it.
inline bool output_classes_hold_inputs(const Partition& p) {
  for (const auto& c : p.classes()) {
    for (const auto& n : c) {
      if (!n.is_fresh_out()) continue;
      for (const auto& m : c)
        if (m != n && !m.is_fresh_in()) return false;
    }
  }
  return true;
}

/// Garbage-free causal configuration: the clock domain is ⊥ plus instantiated
/// or equated outputs; the clock codomain is exactly the instantiated inputs.
inline bool clock_matches_usage(const Configuration& c) {
  const auto* k = std::get_if<CausalClock>(&c.clock);
  if (k == nullptr) return true;
  std::set<std::uint32_t> expected_dom{CausalClock::bottom};
  std::set<std::uint32_t> expected_cod;
  for (const auto& n : c.inst) {
    if (n.is_fresh_out()) expected_dom.insert(n.index());
    if (n.is_fresh_in()) expected_cod.insert(n.index());
  }
  for (const auto& cls : c.gamma.classes())
    for (const auto& n : cls)
      if (n.is_fresh_out()) expected_dom.insert(n.index());
  std::set<std::uint32_t> dom, cod;
  for (const auto& [key, ins] : k->table) {
    dom.insert(key);
    cod.insert(ins.begin(), ins.end());
  }
  return dom == expected_dom && cod == expected_cod;
}

/// Clock indices bounded by the number of boxes.
inline bool clock_within_box_bound(const Configuration& c) {
  const auto* k = std::get_if<CausalClock>(&c.clock);
  if (k == nullptr) return true;
  const auto boxes = c.graph->boxes.size();
  for (const auto& [key, ins] : k->table) {
    if (key > boxes) return false;
    for (auto in : ins)
      if (in < 1 || in > boxes) return false;
  }
  return true;
}

/// Structural checks on a configuration against its static graph.
inline std::vector<std::string> configuration_problems(const Configuration& c) {
  std::vector<std::string> out;
  const auto& g = *c.graph;
  for (BoxId a = 0; a < g.boxes.size(); ++a)
    for (BoxId b = a + 1; b < g.boxes.size(); ++b)
      if (g.boxes[a].name == g.boxes[b].name) out.push_back("box names not injective");
  for (PlaceId p = 0; p < g.places.size(); ++p) {
    const auto& pl = g.places[p];
    const bool has_out = pl.out.has_value(), has_in = pl.in.has_value();
    const bool has_data = pl.data.has_value(), has_data2 = pl.data2.has_value();
    bool shape = false;
    switch (pl.type) {
      case PlaceType::Output: shape = has_out && has_data && !has_in && !has_data2; break;
      case PlaceType::Input: shape = has_in && has_data && !has_out && !has_data2; break;
      case PlaceType::Match: shape = has_data && has_data2 && !has_in && !has_out; break;
      default: shape = !has_in && !has_out && !has_data && !has_data2; break;
    }
    if (!shape) out.push_back("link shape mismatch at place " + std::to_string(p));
    if (pl.type == PlaceType::Input && g.boxes[*pl.data].name.kind() != NameKind::Binder)
      out.push_back("input place without binder box");
    if (pl.ctl.empty()) out.push_back("place without control successor " + std::to_string(p));
  }
  if (c.marking.size() != g.places.size()) out.push_back("marking size");
  if (c.inst.size() != g.boxes.size()) out.push_back("instantiation size");
  if (!partition_well_formed(c.gamma)) out.push_back("partition malformed");
  if (!satisfies_freshness(c)) out.push_back("freshness violated");
  return out;
}

struct InvariantReport {
  std::size_t observable_states = 0;
  std::size_t raw_states = 0;
  long longest_epsilon_run = 0;
  std::size_t bound = 0;
  std::vector<std::string> violations;
};

/// Explores every configuration reachable by raw steps (per-step gc) and
/// checks the structural invariants on each, plus the ε-run bound on the
/// raw graph and the gc-normal-form properties on every observable state.
inline InvariantReport check_invariants(const Configuration& initial, std::size_t bound,
                                        std::size_t max_raw = 200000) {
  InvariantReport rep;
  rep.bound = bound;
  const EngineOptions opts{GcMode::Step, 0};
  const StaticGraph snapshot = *initial.graph;
  const auto fail = [&](const std::string& what, const Configuration& c) {
    if (rep.violations.size() < 20) rep.violations.push_back(what + " at " + render(c));
  };
  const auto check_state = [&](const Configuration& c) {
    if (c.graph != initial.graph || !(*c.graph == snapshot)) fail("static part changed", c);
    if (!satisfies_freshness(c)) fail("freshness", c);
    if (!partition_well_formed(c.gamma)) fail("partition malformed", c);
    if (!output_classes_hold_inputs(c.gamma)) fail("output class with a non-input", c);
    if (!clock_within_box_bound(c)) fail("clock index beyond box count", c);
    if (!clock_matches_usage(c)) fail("clock differs from instantiated names", c);
    if (!(gc(c) == c)) fail("gc not idempotent", c);
  };

  // Raw graph: nodes by key, ε-edges kept for the run-length check.
  std::map<StateKey, std::size_t> index;
  std::vector<Configuration> nodes;
  std::vector<std::vector<std::size_t>> eps;
  const auto add = [&](const Configuration& c) {
    auto [it, fresh] = index.emplace(state_key(c), nodes.size());
    if (fresh) {
      nodes.push_back(c);
      eps.emplace_back();
      check_state(c);
    }
    return it->second;
  };
  add(gc(initial));
  for (std::size_t i = 0; i < nodes.size() && nodes.size() < max_raw; ++i) {
    const auto steps = raw_steps(Configuration(nodes[i]), opts);
    for (const auto& s : steps) {
      if (!satisfies_freshness(s.target)) fail("freshness after " + s.rule, s.target);
      const auto j = add(s.target);
      if (s.label.is_epsilon()) eps[i].push_back(j);
    }
  }
  rep.raw_states = nodes.size();
  if (nodes.size() >= max_raw) {
    rep.violations.push_back("raw exploration exceeded guard");
    return rep;
  }

  // Longest ε-path by memoised DFS; a back edge means an ε-cycle.
  std::vector<long> memo(nodes.size(), -2);  // -2 unvisited, -3 on stack
  bool cycle = false;
  std::function<long(std::size_t)> longest = [&](std::size_t v) -> long {
    if (memo[v] == -3) {
      cycle = true;
      return 0;
    }
    if (memo[v] >= 0) return memo[v];
    memo[v] = -3;
    long best = 0;
    for (auto w : eps[v]) best = std::max(best, 1 + longest(w));
    memo[v] = best;
    return best;
  };
  for (std::size_t v = 0; v < nodes.size(); ++v) rep.longest_epsilon_run = std::max(rep.longest_epsilon_run, longest(v));
  if (cycle) rep.violations.push_back("epsilon cycle");
  if (rep.longest_epsilon_run > static_cast<long>(bound))
    rep.violations.push_back("epsilon run " + std::to_string(rep.longest_epsilon_run) +
                             " exceeds bound " + std::to_string(bound));

  const auto lts = build_lts(initial);
  rep.observable_states = lts.state_count();
  if (lts.truncated) rep.violations.push_back("observable exploration truncated");
  for (const auto& c : lts.states) check_state(c);
  return rep;
}

// ---------------------------------------------------------------------------
// Brute-force greatest bisimulation on the disjoint union.

struct PlainLts {
  std::size_t states = 0;
  std::size_t initial = 0;
  std::vector<std::tuple<std::size_t, std::string, std::size_t>> edges;
};

template <class G>
PlainLts plain(const G& g) {
  PlainLts p;
  p.states = g.state_count();
  p.initial = g.initial;
  for (const auto& t : g.transitions) p.edges.emplace_back(t.source, label_text(t.label), t.target);
  return p;
}

inline bool brute_force_bisimilar(const PlainLts& a, const PlainLts& b) {
  const std::size_t n = a.states + b.states;
  std::vector<std::vector<std::pair<std::string, std::size_t>>> succ(n);
  for (const auto& [s, l, t] : a.edges) succ[s].emplace_back(l, t);
  for (const auto& [s, l, t] : b.edges) succ[a.states + s].emplace_back(l, a.states + t);
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, true));
  const auto simulated = [&](std::size_t p, std::size_t q) {
    for (const auto& [l, p2] : succ[p]) {
      bool ok = false;
      for (const auto& [l2, q2] : succ[q])
        if (l2 == l && rel[p2][q2]) ok = true;
      if (!ok) return false;
    }
    return true;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        if (rel[p][q] && !(simulated(p, q) && simulated(q, p))) {
          rel[p][q] = false;
          changed = true;
        }
  }
  return rel[a.initial][a.states + b.initial];
}

}  // namespace pigraph::testing
