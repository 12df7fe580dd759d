#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pigraph/configuration.hpp"
#include "pigraph/errors.hpp"

namespace pigraph {

enum class LabelKind : std::uint8_t { Tau, Epsilon, Out, In };

struct Label {
  LabelKind kind = LabelKind::Tau;
  Name channel;
  Name datum;

  static Label tau() { return {}; }
  static Label epsilon() { return {LabelKind::Epsilon, {}, {}}; }
  static Label out(Name chan, Name datum) { return {LabelKind::Out, std::move(chan), std::move(datum)}; }
  static Label in(Name chan, Name datum) { return {LabelKind::In, std::move(chan), std::move(datum)}; }

  bool is_epsilon() const noexcept { return kind == LabelKind::Epsilon; }

  /// `tau`, `c!<1!>`, `c?(2?)`; ε renders as `eps` (debug output only).
  std::string str() const {
    switch (kind) {
      case LabelKind::Tau: return "tau";
      case LabelKind::Epsilon: return "eps";
      case LabelKind::Out: return channel.str() + "!<" + datum.str() + ">";
      case LabelKind::In: return channel.str() + "?(" + datum.str() + ")";
    }
    return {};
  }

  friend bool operator==(const Label&, const Label&) = default;
  friend auto operator<=>(const Label&, const Label&) = default;
};

/// Where garbage collection of names is applied.
enum class GcMode {
  Step,  // after every raw rule application
  Obs,   // on targets of observable transitions only
  Off,
};

inline const char* to_string(GcMode m) {
  switch (m) {
    case GcMode::Step: return "step";
    case GcMode::Obs: return "obs";
    case GcMode::Off: return "off";
  }
  return "?";
}

struct Step {
  Label label;
  Configuration target;
  std::string rule;
};

/// Canonical identity of the dynamic part of a configuration.  Only
/// comparable between configurations over the same static graph.
using StateKey = std::string;

inline StateKey state_key(const Configuration& c) {
  std::string key = render_clock(c.clock);
  key += ';';
  key += render_partition(c.gamma);
  key += ";m=";
  bool first = true;
  for (auto p : c.marked_places()) {
    if (!first) key += ',';
    first = false;
    key += std::to_string(p);
  }
  key += ";i=";
  first = true;
  for (BoxId b = 0; b < c.inst.size(); ++b) {
    if (c.inst[b] == c.graph->boxes[b].name) continue;
    if (!first) key += ',';
    first = false;
    key += std::to_string(b) + ":" + c.inst[b].str();
  }
  return key;
}

/// Garbage collection of unused names (causal clocks only; identity otherwise).
///
/// Partition classes keep free names, fresh outputs and instantiated names;
/// the clock keeps ⊥, instantiated outputs and outputs still equated to
/// something, each restricted to instantiated inputs.
inline Configuration gc(const Configuration& c) {
  const auto* causal = std::get_if<CausalClock>(&c.clock);
  if (causal == nullptr) return c;

  const NameSet used(c.inst.begin(), c.inst.end());
  std::vector<NameSet> classes;
  for (const auto& cls : c.gamma.classes()) {
    NameSet kept;
    for (const auto& n : cls)
      if (n.kind() == NameKind::Free || n.is_fresh_out() || used.contains(n)) kept.insert(n);
    classes.push_back(std::move(kept));
  }
  Configuration out = c;
  out.gamma = Partition::from_classes(classes);

  NameSet equated;
  for (const auto& cls : out.gamma.classes()) equated.insert(cls.begin(), cls.end());

  CausalClock clock;
  clock.table.clear();
  for (const auto& [key, ins] : causal->table) {
    const bool keep = key == CausalClock::bottom || used.contains(Name::fresh_out(key)) ||
                      equated.contains(Name::fresh_out(key));
    if (!keep) continue;
    auto& kept = clock.table[key];
    for (auto in : ins)
      if (used.contains(Name::fresh_in(in))) kept.insert(in);
  }
  out.clock = std::move(clock);
  return out;
}

/// Freshness: the next fresh names are not already instantiated.
inline bool satisfies_freshness(const Configuration& c) {
  const auto o = Name::fresh_out(next_out(c.clock));
  const auto i = Name::fresh_in(next_in(c.clock));
  return std::find(c.inst.begin(), c.inst.end(), o) == c.inst.end() &&
         std::find(c.inst.begin(), c.inst.end(), i) == c.inst.end();
}

struct EngineOptions {
  GcMode gc = GcMode::Step;
  // 0 means: take the bound computed for the static graph.
  std::size_t epsilon_bound = 0;
};

namespace detail {

// Compatibility on instantiated names.  Binder, restriction and private names
// never enter the partition: two of them are compatible only when identical,
// and equating a name with itself leaves the partition unchanged.
inline bool instances_compatible(const Configuration& c, const Name& a, const Name& b) {
  if (a.is_partitionable() && b.is_partitionable()) return compatible(c.gamma, c.clock, a, b);
  return a == b;
}

inline Partition instances_refine(const Configuration& c, const Name& a, const Name& b) {
  if (a.is_partitionable() && b.is_partitionable()) return refine(c.gamma, c.clock, a, b);
  return c.gamma;
}

class Engine {
 public:
  Engine(EngineOptions opts, std::size_t bound) : opts_(opts), bound_(bound) {}

  bool gc_each_step(const Configuration& c) const {
    return opts_.gc == GcMode::Step && std::holds_alternative<CausalClock>(c.clock);
  }

  Configuration finish(Configuration c) const { return gc_each_step(c) ? gc(c) : c; }

  // Every one-step derivation.  `sealed` is a terminating place that must not
  // fire: the end of a sum branch explored in isolation.
  std::vector<Step> raw(const Configuration& c, std::optional<PlaceId> sealed = std::nullopt) const {
    std::vector<Step> out;
    const auto& g = *c.graph;
    const auto marked = c.marked_places();
    for (auto p : marked) {
      const auto& place = g.places[p];
      switch (place.type) {
        case PlaceType::Silent: {
          auto t = move_token(c, p, *place.next);
          out.push_back({Label::tau(), finish(std::move(t)), "silent"});
          break;
        }
        case PlaceType::Output: {
          const auto& chan = c.inst[*place.out];
          const auto& datum = c.inst[*place.data];
          if (!chan.is_public()) break;
          if (datum.is_public()) {
            out.push_back({Label::out(chan, datum), finish(move_token(c, p, *place.next)), "out"});
          } else {
            const auto fresh = Name::fresh_out(next_out(c.clock));
            auto t = move_token(c, p, *place.next);
            t.inst[*place.data] = fresh;
            t.clock = tick_out(c.clock);
            out.push_back({Label::out(chan, fresh), finish(std::move(t)), "o-fresh"});
          }
          break;
        }
        case PlaceType::Input: {
          const auto& chan = c.inst[*place.in];
          if (!chan.is_public()) break;
          const auto fresh = Name::fresh_in(next_in(c.clock));
          auto t = move_token(c, p, *place.next);
          t.inst[*place.data] = fresh;
          t.clock = tick_in(c.clock);
          out.push_back({Label::in(chan, fresh), finish(std::move(t)), "i-fresh"});
          break;
        }
        case PlaceType::Match: {
          const auto& left = c.inst[*place.data];
          const auto& right = c.inst[*place.data2];
          if (!instances_compatible(c, left, right)) break;
          auto t = move_token(c, p, *place.next);
          t.gamma = instances_refine(c, left, right);
          out.push_back({Label::epsilon(), finish(std::move(t)), "match"});
          break;
        }
        case PlaceType::Sum: sum_steps(c, p, out); break;
        case PlaceType::Par: {
          auto t = c;
          t.marking[p] = false;
          for (auto q : place.ctl) t.marking[q] = true;
          out.push_back({Label::epsilon(), finish(std::move(t)), "par"});
          break;
        }
        case PlaceType::Iter: {
          out.push_back({Label::epsilon(), finish(move_token(c, p, place.ctl.front())), "iter"});
          break;
        }
        case PlaceType::Terminal: {
          if (sealed && *sealed == p) break;
          terminal_step(c, p, out);
          break;
        }
      }
    }
    sync_steps(c, marked, out);
    return out;
  }

  // States reachable through ε-steps (including `c`), breadth first.
  std::vector<Configuration> epsilon_closure(const Configuration& c,
                                             std::optional<PlaceId> sealed = std::nullopt) const {
    std::vector<Configuration> states{c};
    std::unordered_set<StateKey> seen{state_key(c)};
    std::size_t level_begin = 0, depth = 0;
    while (level_begin < states.size()) {
      const std::size_t level_end = states.size();
      for (std::size_t i = level_begin; i < level_end; ++i) {
        for (auto& s : raw(states[i], sealed)) {
          if (!s.label.is_epsilon()) continue;
          if (!seen.insert(state_key(s.target)).second) continue;
          if (depth + 1 > bound_)
            throw EpsilonBoundExceeded("epsilon run longer than the static bound " +
                                       std::to_string(bound_));
          states.push_back(std::move(s.target));
        }
      }
      level_begin = level_end;
      ++depth;
    }
    return states;
  }

  // All ε*μ derivations with μ ≠ ε.
  std::vector<Step> observable(const Configuration& c,
                               std::optional<PlaceId> sealed = std::nullopt) const {
    std::vector<Step> out;
    std::set<std::pair<Label, StateKey>> seen;
    for (const auto& s : epsilon_closure(c, sealed)) {
      for (auto& step : raw(s, sealed)) {
        if (step.label.is_epsilon()) continue;
        if (opts_.gc != GcMode::Off) step.target = gc(step.target);
        if (!seen.emplace(step.label, state_key(step.target)).second) continue;
        out.push_back(std::move(step));
      }
    }
    return out;
  }

 private:
  static Configuration move_token(const Configuration& c, PlaceId from, PlaceId to) {
    auto t = c;
    t.marking[from] = false;
    t.marking[to] = true;
    return t;
  }

  void terminal_step(const Configuration& c, PlaceId p, std::vector<Step>& out) const {
    const auto& g = *c.graph;
    const auto& place = g.places[p];
    switch (place.owner) {
      case TerminalOwner::Iterator: {
        auto t = move_token(c, p, place.ctl.front());
        for (auto b : g.iterators[place.iterator].local_boxes) t.inst[b] = g.boxes[b].name;
        out.push_back({Label::epsilon(), finish(std::move(t)), "iter0"});
        break;
      }
      case TerminalOwner::SumBranch:
        out.push_back({Label::epsilon(), finish(move_token(c, p, place.ctl.front())), "sum0"});
        break;
      case TerminalOwner::ParBranch: {
        const auto& par = g.places[place.owner_place];
        // One derivation per join, reported from the first branch's terminal.
        if (g.processes[par.branches.front()].end != p) break;
        for (auto b : par.branches)
          if (!c.marked(g.processes[b].end)) return;
        auto t = c;
        for (auto b : par.branches) t.marking[g.processes[b].end] = false;
        t.marking[*par.next] = true;
        out.push_back({Label::epsilon(), finish(std::move(t)), "par0"});
        break;
      }
    }
  }

  void sync_steps(const Configuration& c, const std::vector<PlaceId>& marked,
                  std::vector<Step>& out) const {
    const auto& g = *c.graph;
    for (auto o : marked) {
      if (g.places[o].type != PlaceType::Output) continue;
      for (auto i : marked) {
        if (g.places[i].type != PlaceType::Input) continue;
        const auto binder = *g.places[i].data;
        if (c.inst[binder] != g.boxes[binder].name) continue;
        const auto& chan_out = c.inst[*g.places[o].out];
        const auto& chan_in = c.inst[*g.places[i].in];
        if (!instances_compatible(c, chan_out, chan_in)) continue;
        auto t = c;
        t.gamma = instances_refine(c, chan_out, chan_in);
        t.inst[binder] = c.inst[*g.places[o].data];
        t.marking[o] = false;
        t.marking[*g.places[o].next] = true;
        t.marking[i] = false;
        t.marking[*g.places[i].next] = true;
        out.push_back({Label::tau(), finish(std::move(t)), "sync"});
      }
    }
  }

  // A branch is explored alone: only its own token, its end sealed.  Each
  // ε*μ derivation found there becomes one step of the whole configuration.
  void sum_steps(const Configuration& c, PlaceId p, std::vector<Step>& out) const {
    const auto& g = *c.graph;
    const auto& place = g.places[p];
    for (auto branch : place.branches) {
      const auto& node = g.processes[branch];
      auto alone = c;
      std::fill(alone.marking.begin(), alone.marking.end(), false);
      alone.marking[node.prefixes.front()] = true;
      for (auto& s : observable_in_branch(alone, node.end)) {
        auto marking = c.marking;
        marking[p] = false;
        for (PlaceId q = 0; q < marking.size(); ++q)
          if (s.target.marking[q]) marking[q] = true;
        s.target.marking = std::move(marking);
        s.rule = "sum";
        out.push_back(std::move(s));
      }
    }
  }

  std::vector<Step> observable_in_branch(const Configuration& c, PlaceId sealed) const {
    std::vector<Step> out;
    std::set<std::pair<Label, StateKey>> seen;
    for (const auto& s : epsilon_closure(c, sealed)) {
      for (auto& step : raw(s, sealed)) {
        if (step.label.is_epsilon()) continue;
        if (!seen.emplace(step.label, state_key(step.target)).second) continue;
        out.push_back(std::move(step));
      }
    }
    return out;
  }

  EngineOptions opts_;
  std::size_t bound_;
};

inline std::size_t bound_for(const Configuration& c, const EngineOptions& opts) {
  return opts.epsilon_bound != 0 ? opts.epsilon_bound : c.graph->epsilon_bound;
}

inline EngineOptions effective(EngineOptions opts, const Configuration& c) {
  if (std::holds_alternative<LogicalClock>(c.clock)) opts.gc = GcMode::Off;
  return opts;
}

}  // namespace detail

/// One-step derivations of the rule table from `c` (ε-steps included).
/// Under GcMode::Step with a causal clock every target is garbage-collected.
inline std::vector<Step> raw_steps(const Configuration& c, EngineOptions opts = {}) {
  opts = detail::effective(opts, c);
  return detail::Engine(opts, detail::bound_for(c, opts)).raw(c);
}

/// Observable transitions: ε-closure of `c` followed by one non-ε step.
/// Targets are garbage-collected unless gc is off.  Throws
/// EpsilonBoundExceeded if an ε-run outgrows the bound.
inline std::vector<Step> observable_steps(const Configuration& c, EngineOptions opts = {}) {
  opts = detail::effective(opts, c);
  return detail::Engine(opts, detail::bound_for(c, opts)).observable(c);
}

/// Configurations reachable from `c` through ε-steps only, `c` first.
inline std::vector<Configuration> epsilon_closure(const Configuration& c, EngineOptions opts = {}) {
  opts = detail::effective(opts, c);
  return detail::Engine(opts, detail::bound_for(c, opts)).epsilon_closure(c);
}

}  // namespace pigraph
