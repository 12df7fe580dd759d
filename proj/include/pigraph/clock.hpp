#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pigraph/name.hpp"

namespace pigraph {

enum class ClockModel { Logical, Causal };

inline const char* to_string(ClockModel model) {
  return model == ClockModel::Logical ? "logical" : "causal";
}

/// Natural-number clock: both fresh kinds draw from one counter.
struct LogicalClock {
  std::uint64_t value = 0;

  friend bool operator==(const LogicalClock&, const LogicalClock&) = default;
};

/// Causal clock: a partial map from {⊥} ∪ fresh outputs to sets of fresh
/// inputs created after them.
///
/// Key 0 stands for ⊥ (fresh indices start at 1), so ⊥ sorts first.  The
/// value set holds the indices of the fresh inputs.
struct CausalClock {
  static constexpr std::uint32_t bottom = 0;

  std::map<std::uint32_t, std::set<std::uint32_t>> table{{bottom, {}}};

  friend bool operator==(const CausalClock&, const CausalClock&) = default;
};

using Clock = std::variant<LogicalClock, CausalClock>;

inline Clock init_clock(ClockModel model) {
  if (model == ClockModel::Logical) return LogicalClock{};
  return CausalClock{};
}

inline ClockModel model_of(const Clock& clock) {
  return std::holds_alternative<LogicalClock>(clock) ? ClockModel::Logical : ClockModel::Causal;
}

namespace detail {

template <class Set>
std::uint32_t smallest_absent_positive(const Set& used) {
  std::uint32_t candidate = 1;
  for (auto n : used) {
    if (n < candidate) continue;
    if (n != candidate) break;
    ++candidate;
  }
  return candidate;
}

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace detail

inline std::uint32_t next_out(const Clock& clock) {
  return std::visit(
      detail::overloaded{
          [](const LogicalClock& c) { return static_cast<std::uint32_t>(c.value + 1); },
          [](const CausalClock& c) {
            std::set<std::uint32_t> outs;
            for (const auto& [out, _] : c.table)
              if (out != CausalClock::bottom) outs.insert(out);
            return detail::smallest_absent_positive(outs);
          }},
      clock);
}

inline std::uint32_t next_in(const Clock& clock) {
  return std::visit(
      detail::overloaded{
          [](const LogicalClock& c) { return static_cast<std::uint32_t>(c.value + 1); },
          [](const CausalClock& c) {
            std::set<std::uint32_t> ins;
            for (const auto& [_, set] : c.table) ins.insert(set.begin(), set.end());
            return detail::smallest_absent_positive(ins);
          }},
      clock);
}

inline Clock tick_out(const Clock& clock) {
  return std::visit(
      detail::overloaded{
          [](const LogicalClock& c) -> Clock { return LogicalClock{c.value + 1}; },
          [&](const CausalClock& c) -> Clock {
            CausalClock next = c;
            next.table.emplace(next_out(clock), std::set<std::uint32_t>{});
            return next;
          }},
      clock);
}

inline Clock tick_in(const Clock& clock) {
  return std::visit(
      detail::overloaded{
          [](const LogicalClock& c) -> Clock { return LogicalClock{c.value + 1}; },
          [&](const CausalClock& c) -> Clock {
            const auto fresh = next_in(clock);
            CausalClock next = c;
            for (auto& [_, set] : next.table) set.insert(fresh);
            return next;
          }},
      clock);
}

/// Read-write causality: may the fresh output be equated with the fresh input?
inline bool precedes(const Clock& clock, std::uint32_t out_index, std::uint32_t in_index) {
  return std::visit(
      detail::overloaded{
          [&](const LogicalClock&) { return out_index < in_index; },
          [&](const CausalClock& c) {
            const auto it = c.table.find(out_index);
            return out_index != CausalClock::bottom && it != c.table.end() &&
                   it->second.contains(in_index);
          }},
      clock);
}

inline bool precedes(const Clock& clock, const Name& out, const Name& in) {
  if (!out.is_fresh_out() || !in.is_fresh_in())
    throw std::invalid_argument("precedes: expects a fresh output and a fresh input");
  return precedes(clock, out.index(), in.index());
}

/// Names mentioned by a causal clock: its non-⊥ domain plus every input in its codomain.
inline std::set<Name> names_of(const Clock& clock) {
  const auto* causal = std::get_if<CausalClock>(&clock);
  if (causal == nullptr) throw std::invalid_argument("names_of: undefined for logical clocks");
  std::set<Name> names;
  for (const auto& [out, ins] : causal->table) {
    if (out != CausalClock::bottom) names.insert(Name::fresh_out(out));
    for (auto in : ins) names.insert(Name::fresh_in(in));
  }
  return names;
}

inline std::string render_clock(const Clock& clock) {
  return std::visit(
      detail::overloaded{
          [](const LogicalClock& c) { return std::to_string(c.value); },
          [](const CausalClock& c) {
            std::string out = "<";
            bool first = true;
            for (const auto& [key, ins] : c.table) {
              if (!first) out += ' ';
              first = false;
              out += key == CausalClock::bottom ? std::string("⊥") : std::to_string(key) + "!";
              out += ":{";
              bool first_in = true;
              for (auto in : ins) {
                if (!first_in) out += ',';
                first_in = false;
                out += std::to_string(in) + "?";
              }
              out += '}';
            }
            return out + ">";
          }},
      clock);
}

/// JSON form: a number for logical clocks, a sorted list of
/// `{"out": "⊥"|"n!", "ins": ["m?", ...]}` for causal clocks.
inline nlohmann::json clock_to_json(const Clock& clock) {
  return std::visit(
      detail::overloaded{
          [](const LogicalClock& c) { return nlohmann::json(c.value); },
          [](const CausalClock& c) {
            auto entries = nlohmann::json::array();
            for (const auto& [key, ins] : c.table) {
              auto in_names = nlohmann::json::array();
              for (auto in : ins) in_names.push_back(std::to_string(in) + "?");
              entries.push_back({{"out", key == CausalClock::bottom ? std::string("⊥")
                                                                    : std::to_string(key) + "!"},
                                 {"ins", in_names}});
            }
            return entries;
          }},
      clock);
}

inline Clock clock_from_json(const nlohmann::json& j) {
  if (j.is_number_unsigned()) return LogicalClock{j.get<std::uint64_t>()};
  if (!j.is_array()) throw std::invalid_argument("clock_from_json: expected number or array");
  CausalClock clock;
  clock.table.clear();
  for (const auto& entry : j) {
    const auto out = entry.at("out").get<std::string>();
    const std::uint32_t key = out == "⊥" ? CausalClock::bottom : parse_name(out).index();
    auto& ins = clock.table[key];
    for (const auto& in : entry.at("ins")) ins.insert(parse_name(in.get<std::string>()).index());
  }
  if (!clock.table.contains(CausalClock::bottom))
    throw std::invalid_argument("clock_from_json: causal clock without ⊥ entry");
  return clock;
}

}  // namespace pigraph
