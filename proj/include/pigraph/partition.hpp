#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pigraph/clock.hpp"
#include "pigraph/name.hpp"

namespace pigraph {

using NameSet = std::set<Name>;

/// Dynamic equality on free and fresh names.
///
/// Only classes of size >= 2 are stored; every other name is implicitly in
/// its own singleton class, so the empty partition is the initial one.
/// Classes are kept sorted, which makes equality structural.
class Partition {
 public:
  Partition() = default;

  /// Builds a partition from explicit classes; singletons are dropped.
  static Partition from_classes(const std::vector<NameSet>& classes) {
    Partition p;
    NameSet seen;
    for (const auto& c : classes) {
      for (const auto& n : c) {
        if (!n.is_partitionable())
          throw std::invalid_argument("partition: name of wrong kind " + n.str());
        if (!seen.insert(n).second) throw std::invalid_argument("partition: overlapping classes");
      }
      if (c.size() >= 2) p.classes_.push_back(c);
    }
    std::sort(p.classes_.begin(), p.classes_.end());
    return p;
  }

  const std::vector<NameSet>& classes() const noexcept { return classes_; }
  bool empty() const noexcept { return classes_.empty(); }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  friend Partition refine(const Partition&, const Clock&, const Name&, const Name&);
  std::vector<NameSet> classes_;
};

namespace detail {
inline void require_partitionable(const Name& n) {
  if (!n.is_partitionable())
    throw std::invalid_argument("name " + n.str() + " cannot belong to a partition");
}
}  // namespace detail

inline NameSet class_of(const Partition& gamma, const Name& n) {
  detail::require_partitionable(n);
  for (const auto& c : gamma.classes())
    if (c.contains(n)) return c;
  return {n};
}

/// The candidate-equality relation on single names under a clock.
inline bool may_equal(const Clock& clock, const Name& a, const Name& b) {
  if (a == b) return true;
  const auto free_or_in = [](const Name& n) { return n.kind() == NameKind::Free || n.is_fresh_in(); };
  if (free_or_in(a) && free_or_in(b)) return true;
  if (a.is_fresh_out() && b.is_fresh_in()) return precedes(clock, a, b);
  if (b.is_fresh_out() && a.is_fresh_in()) return precedes(clock, b, a);
  return false;
}

inline bool compatible(const Partition& gamma, const Clock& clock, const Name& a, const Name& b) {
  const auto left = class_of(gamma, a);
  const auto right = class_of(gamma, b);
  for (const auto& n : left)
    for (const auto& m : right)
      if (!may_equal(clock, n, m)) return false;
  return true;
}

/// Merges the classes of `a` and `b`.  Throws when they are not compatible.
inline Partition refine(const Partition& gamma, const Clock& clock, const Name& a, const Name& b) {
  if (!compatible(gamma, clock, a, b))
    throw std::logic_error("refine: " + a.str() + " and " + b.str() + " are not compatible");
  auto merged = class_of(gamma, a);
  const auto other = class_of(gamma, b);
  merged.insert(other.begin(), other.end());

  Partition out;
  for (const auto& c : gamma.classes())
    if (!c.contains(a) && !c.contains(b)) out.classes_.push_back(c);
  if (merged.size() >= 2) out.classes_.push_back(std::move(merged));
  std::sort(out.classes_.begin(), out.classes_.end());
  return out;
}

/// `{1!,2?},{a,3?}`; the empty partition renders as `{}`.
inline std::string render_partition(const Partition& gamma) {
  if (gamma.empty()) return "{}";
  std::string out;
  for (const auto& c : gamma.classes()) {
    if (!out.empty()) out += ',';
    out += '{';
    bool first = true;
    for (const auto& n : c) {
      if (!first) out += ',';
      first = false;
      out += n.str();
    }
    out += '}';
  }
  return out;
}

}  // namespace pigraph
