#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pigraph/errors.hpp"
#include "pigraph/lts.hpp"

namespace pigraph {

/// Anything with numbered states, an initial state and labelled transitions.
template <class G>
concept TransitionSystem = requires(const G& g) {
  { g.state_count() } -> std::convertible_to<std::size_t>;
  { g.initial } -> std::convertible_to<std::size_t>;
  { g.truncated } -> std::convertible_to<bool>;
  { label_text(g.transitions.front().label) } -> std::convertible_to<std::string>;
  { g.transitions.front().source } -> std::convertible_to<std::size_t>;
  { g.transitions.front().target } -> std::convertible_to<std::size_t>;
};

enum class Side { Left, Right };

struct WitnessStep {
  Side side;
  std::string label;

  friend bool operator==(const WitnessStep&, const WitnessStep&) = default;
};

/// Outcome of a bisimilarity check.  When the systems differ, `witness` is a
/// sequence of moves; the last one cannot be matched by the other side.
struct BisimVerdict {
  bool bisimilar = false;
  std::vector<WitnessStep> witness;
};

namespace detail {

// Disjoint union of two systems with interned labels.
struct UnionGraph {
  std::size_t left_states = 0;
  std::size_t size = 0;
  std::vector<std::vector<std::pair<int, std::size_t>>> succ;  // (label, target), sorted
  std::vector<std::string> labels;
};

template <TransitionSystem A, TransitionSystem B>
UnionGraph make_union(const A& a, const B& b) {
  UnionGraph u;
  u.left_states = a.state_count();
  u.size = a.state_count() + b.state_count();
  u.succ.resize(u.size);
  std::map<std::string, int> ids;
  const auto intern = [&](const std::string& s) {
    const auto [it, fresh] = ids.emplace(s, static_cast<int>(u.labels.size()));
    if (fresh) u.labels.push_back(s);
    return it->second;
  };
  for (const auto& t : a.transitions)
    u.succ[t.source].emplace_back(intern(label_text(t.label)), t.target);
  for (const auto& t : b.transitions)
    u.succ[u.left_states + t.source].emplace_back(intern(label_text(t.label)),
                                                  u.left_states + t.target);
  for (auto& s : u.succ) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  return u;
}

// Naive partition refinement.  rounds[r][s] is the block of s after r
// refinement rounds; the last entry is the coarsest bisimulation.
inline std::vector<std::vector<std::size_t>> refine_rounds(const UnionGraph& u) {
  std::vector<std::vector<std::size_t>> rounds{std::vector<std::size_t>(u.size, 0)};
  std::size_t blocks = u.size == 0 ? 0 : 1;
  while (true) {
    const auto& prev = rounds.back();
    std::map<std::pair<std::size_t, std::vector<std::pair<int, std::size_t>>>, std::size_t> ids;
    std::vector<std::size_t> next(u.size);
    for (std::size_t s = 0; s < u.size; ++s) {
      std::vector<std::pair<int, std::size_t>> sig;
      for (const auto& [label, t] : u.succ[s]) sig.emplace_back(label, prev[t]);
      std::sort(sig.begin(), sig.end());
      sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
      const auto [it, _] = ids.emplace(std::make_pair(prev[s], std::move(sig)), ids.size());
      next[s] = it->second;
    }
    const bool stable = ids.size() == blocks;
    blocks = ids.size();
    if (stable) break;
    rounds.push_back(std::move(next));
  }
  return rounds;
}

// First round in which s and t sit in different blocks.
inline std::optional<std::size_t> split_level(const std::vector<std::vector<std::size_t>>& rounds,
                                              std::size_t s, std::size_t t) {
  for (std::size_t r = 0; r < rounds.size(); ++r)
    if (rounds[r][s] != rounds[r][t]) return r;
  return std::nullopt;
}

inline std::vector<WitnessStep> extract_witness(const UnionGraph& u,
                                                const std::vector<std::vector<std::size_t>>& rounds,
                                                std::size_t left, std::size_t right) {
  std::vector<WitnessStep> trace;
  std::size_t s = left, t = right;
  while (true) {
    const auto level = split_level(rounds, s, t);
    if (!level || *level == 0) break;  // unreachable for a split pair
    const auto& before = rounds[*level - 1];
    // Find a move of one side whose every answer was already separated one
    // round earlier; the defender then picks the answer that survives longest.
    bool found = false;
    for (const Side side : {Side::Left, Side::Right}) {
      const auto attacker = side == Side::Left ? s : t;
      const auto defender = side == Side::Left ? t : s;
      for (const auto& [label, a_next] : u.succ[attacker]) {
        std::vector<std::size_t> answers;
        bool matched = false;
        for (const auto& [l2, d_next] : u.succ[defender]) {
          if (l2 != label) continue;
          if (before[d_next] == before[a_next]) matched = true;
          answers.push_back(d_next);
        }
        if (matched) continue;
        trace.push_back({side, u.labels[label]});
        if (answers.empty()) return trace;
        std::size_t best = answers.front();
        std::size_t best_level = split_level(rounds, a_next, best).value_or(0);
        for (auto d : answers) {
          const auto lvl = split_level(rounds, a_next, d).value_or(0);
          if (lvl > best_level || (lvl == best_level && d < best)) {
            best = d;
            best_level = lvl;
          }
        }
        if (side == Side::Left) {
          s = a_next;
          t = best;
        } else {
          s = best;
          t = a_next;
        }
        found = true;
        break;
      }
      if (found) break;
    }
    if (!found) break;
  }
  return trace;
}

}  // namespace detail

/// Strong bisimilarity of two finite transition systems over exact label
/// equality.  Refuses truncated inputs.
template <TransitionSystem A, TransitionSystem B>
BisimVerdict bisimilar(const A& a, const B& b) {
  if (a.truncated || b.truncated)
    throw TruncatedInput("bisimilarity needs completely explored state spaces");
  const auto u = detail::make_union(a, b);
  const auto rounds = detail::refine_rounds(u);
  const auto left = a.initial;
  const auto right = u.left_states + b.initial;
  BisimVerdict v;
  v.bisimilar = rounds.back()[left] == rounds.back()[right];
  if (!v.bisimilar) v.witness = detail::extract_witness(u, rounds, left, right);
  return v;
}

}  // namespace pigraph
