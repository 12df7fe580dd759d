#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pigraph/ast.hpp"
#include "pigraph/clock.hpp"
#include "pigraph/partition.hpp"

namespace pigraph {

using PlaceId = std::uint32_t;
using BoxId = std::uint32_t;

enum class PlaceType : std::uint8_t { Terminal, Silent, Input, Output, Match, Sum, Par, Iter };

inline const char* to_string(PlaceType t) {
  switch (t) {
    case PlaceType::Terminal: return "0";
    case PlaceType::Silent: return "tau";
    case PlaceType::Input: return "i";
    case PlaceType::Output: return "o";
    case PlaceType::Match: return "=";
    case PlaceType::Sum: return "sum";
    case PlaceType::Par: return "par";
    case PlaceType::Iter: return "*";
  }
  return "?";
}

/// What a terminating place hands control back to.
enum class TerminalOwner : std::uint8_t { Iterator, SumBranch, ParBranch };

struct Place {
  PlaceType type = PlaceType::Silent;
  std::size_t iterator = 0;

  // Data links. Output: channel on `out`, datum on `data`.  Input: channel on
  // `in`, binder on `data`.  Match: operands on `data` and `data2`.
  std::optional<BoxId> data;
  std::optional<BoxId> data2;
  std::optional<BoxId> in;
  std::optional<BoxId> out;

  // Control successors.  Prefix places: the continuation (or the branch
  // initial places for sum/par).  Terminal places: where [sum0]/[par0]/[iter0]
  // move the token.  The iterator place: the body's initial place.
  std::vector<PlaceId> ctl;

  // Prefix places only: the continuation place after the whole prefix.
  std::optional<PlaceId> next;

  // Sum/par places: index of each branch in StaticGraph::processes.
  std::vector<std::size_t> branches;

  // Terminal places only.
  TerminalOwner owner = TerminalOwner::Iterator;
  PlaceId owner_place = 0;

  friend bool operator==(const Place&, const Place&) = default;
};

struct Box {
  Name name;
  // Owning iterator for private and binder boxes; globals have none.
  std::optional<std::size_t> iterator;

  friend bool operator==(const Box&, const Box&) = default;
};

/// Prefix places of one process, in order, and its terminating place.
struct ProcessNode {
  std::vector<PlaceId> prefixes;
  PlaceId end = 0;

  friend bool operator==(const ProcessNode&, const ProcessNode&) = default;
};

struct IteratorNode {
  PlaceId star = 0;
  std::size_t body = 0;
  std::vector<BoxId> local_boxes;

  friend bool operator==(const IteratorNode&, const IteratorNode&) = default;
};

/// The part of a configuration that never changes along transitions.
struct StaticGraph {
  std::vector<Place> places;
  std::vector<Box> boxes;
  std::vector<ProcessNode> processes;
  std::vector<IteratorNode> iterators;
  std::size_t epsilon_bound = 0;

  std::optional<BoxId> box_of(const Name& n) const {
    for (BoxId b = 0; b < boxes.size(); ++b)
      if (boxes[b].name == n) return b;
    return std::nullopt;
  }

  friend bool operator==(const StaticGraph&, const StaticGraph&) = default;
};

/// Static graph plus the dynamic quadruple (clock, partition, marking, instantiation).
struct Configuration {
  std::shared_ptr<const StaticGraph> graph;
  Clock clock;
  Partition gamma;
  std::vector<bool> marking;
  std::vector<Name> inst;

  bool marked(PlaceId p) const { return marking[p]; }

  std::vector<PlaceId> marked_places() const {
    std::vector<PlaceId> out;
    for (PlaceId p = 0; p < marking.size(); ++p)
      if (marking[p]) out.push_back(p);
    return out;
  }

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.graph == b.graph && a.clock == b.clock && a.gamma == b.gamma &&
           a.marking == b.marking && a.inst == b.inst;
  }
};

namespace detail {

inline std::size_t prefix_bound(const PrefixAst& p);

inline std::size_t process_bound(const ProcessAst& p) {
  std::size_t total = 0;
  for (const auto& prefix : p.prefixes) total += prefix_bound(prefix);
  return total;
}

inline std::size_t prefix_bound(const PrefixAst& p) {
  if (std::holds_alternative<MatchAst>(p.node)) return 1;
  if (const auto* par = std::get_if<ParAst>(&p.node)) {
    std::size_t total = 1;
    for (const auto& b : par->branches) total += process_bound(b);
    return total;
  }
  if (const auto* sum = std::get_if<SumAst>(&p.node)) {
    std::size_t best = 0;
    for (const auto& b : sum->branches) best = std::max(best, process_bound(b));
    return best + 1;
  }
  return 0;
}

class Compiler {
 public:
  explicit Compiler(const GraphAst& ast) : ast_(ast) {}

  StaticGraph run() {
    for (const auto& r : ast_.free_names) add_box(Name::free(r.ident), std::nullopt);
    for (const auto& r : ast_.restrictions) add_box(Name::restriction(r.ident), std::nullopt);
    for (std::size_t i = 0; i < ast_.iterators.size(); ++i) {
      const auto& it = ast_.iterators[i];
      IteratorNode node;
      for (const auto& r : it.privates) node.local_boxes.push_back(add_box(Name::priv(r.ident), i));
      for (const auto& r : it.binders) node.local_boxes.push_back(add_box(Name::binder(r.ident), i));
      g_.iterators.push_back(std::move(node));
    }
    for (iter_ = 0; iter_ < ast_.iterators.size(); ++iter_) {
      const PlaceId star = add_place(PlaceType::Iter);
      g_.iterators[iter_].star = star;
      const auto body = compile_process(ast_.iterators[iter_].body, TerminalOwner::Iterator, star);
      g_.iterators[iter_].body = body;
      g_.places[star].ctl = {initial_place(body)};
      g_.places[g_.processes[body].end].ctl = {star};
    }
    for (const auto& it : ast_.iterators) g_.epsilon_bound += 2 * process_bound(it.body) + 2;
    return std::move(g_);
  }

 private:
  BoxId add_box(Name n, std::optional<std::size_t> iter) {
    g_.boxes.push_back({std::move(n), iter});
    return static_cast<BoxId>(g_.boxes.size() - 1);
  }

  PlaceId add_place(PlaceType t) {
    Place p;
    p.type = t;
    p.iterator = iter_;
    g_.places.push_back(std::move(p));
    return static_cast<PlaceId>(g_.places.size() - 1);
  }

  BoxId box(const NameRef& r) const {
    return *g_.box_of(*resolve_name(ast_, iter_, r.ident));
  }

  PlaceId initial_place(std::size_t proc) const {
    const auto& node = g_.processes[proc];
    return node.prefixes.empty() ? node.end : node.prefixes.front();
  }

  std::size_t compile_process(const ProcessAst& p, TerminalOwner owner, PlaceId owner_place) {
    const std::size_t index = g_.processes.size();
    g_.processes.emplace_back();
    std::vector<PlaceId> prefixes;
    for (const auto& prefix : p.prefixes) prefixes.push_back(compile_prefix(prefix));
    const PlaceId end = add_place(PlaceType::Terminal);
    g_.places[end].owner = owner;
    g_.places[end].owner_place = owner_place;
    for (std::size_t i = 0; i < prefixes.size(); ++i) {
      auto& place = g_.places[prefixes[i]];
      place.next = i + 1 < prefixes.size() ? prefixes[i + 1] : end;
      if (place.type != PlaceType::Sum && place.type != PlaceType::Par) {
        place.ctl = {*place.next};
        continue;
      }
      for (auto branch : place.branches) g_.places[g_.processes[branch].end].ctl = {*place.next};
    }
    g_.processes[index] = {std::move(prefixes), end};
    return index;
  }

  PlaceId compile_prefix(const PrefixAst& prefix) {
    return std::visit(
        [&](const auto& node) -> PlaceId {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, SilentAst>) {
            return add_place(PlaceType::Silent);
          } else if constexpr (std::is_same_v<T, OutputAst>) {
            const auto p = add_place(PlaceType::Output);
            g_.places[p].out = box(node.channel);
            g_.places[p].data = box(node.datum);
            return p;
          } else if constexpr (std::is_same_v<T, InputAst>) {
            const auto p = add_place(PlaceType::Input);
            g_.places[p].in = box(node.channel);
            g_.places[p].data = box(node.binder);
            return p;
          } else if constexpr (std::is_same_v<T, MatchAst>) {
            const auto p = add_place(PlaceType::Match);
            g_.places[p].data = box(node.left);
            g_.places[p].data2 = box(node.right);
            return p;
          } else {
            constexpr bool is_sum = std::is_same_v<T, SumAst>;
            const auto p = add_place(is_sum ? PlaceType::Sum : PlaceType::Par);
            const auto owner = is_sum ? TerminalOwner::SumBranch : TerminalOwner::ParBranch;
            for (const auto& b : node.branches) {
              const auto proc = compile_process(b, owner, p);
              g_.places[p].branches.push_back(proc);
              g_.places[p].ctl.push_back(initial_place(proc));
            }
            return p;
          }
        },
        prefix.node);
  }

  const GraphAst& ast_;
  StaticGraph g_;
  std::size_t iter_ = 0;
};

}  // namespace detail

/// Static upper bound on the length of ε-runs of a graph.
///
/// Prefixes: silent/input/output 0, match 1, par sum of branches + 1, sum
/// max of branches + 1.  Processes add their prefixes; an iterator with body
/// bound b contributes 2b + 2; iterators add up.
inline std::size_t epsilon_bound(const GraphAst& ast) {
  std::size_t total = 0;
  for (const auto& it : ast.iterators) total += 2 * detail::process_bound(it.body) + 2;
  return total;
}

/// Builds the initial configuration of a validated AST.
inline Configuration compile(const GraphAst& ast, ClockModel model = ClockModel::Causal) {
  auto graph = std::make_shared<StaticGraph>(detail::Compiler(ast).run());
  Configuration c;
  c.clock = init_clock(model);
  c.marking.assign(graph->places.size(), false);
  for (const auto& it : graph->iterators) c.marking[it.star] = true;
  for (const auto& b : graph->boxes) c.inst.push_back(b.name);
  c.graph = std::move(graph);
  return c;
}

namespace detail {

class Renderer {
 public:
  explicit Renderer(const Configuration& c) : c_(c), g_(*c.graph) {}

  std::string run() {
    std::string out = render_clock(c_.clock);
    out += ';';
    out += render_partition(c_.gamma);
    out += " |- ";
    for (std::size_t i = 0; i < g_.iterators.size(); ++i) {
      if (i > 0) out += " || ";
      const auto& it = g_.iterators[i];
      const bool marked = c_.marked(it.star);
      out += marked ? "*{ " : "*[ ";
      process(out, it.body);
      out += marked ? " }" : " ]";
    }
    return out;
  }

 private:
  std::string box(BoxId b) const {
    const auto& bn = g_.boxes[b].name;
    const auto& now = c_.inst[b];
    return bn == now ? bn.str() : bn.str() + "|" + now.str();
  }

  void process(std::string& out, std::size_t proc) const {
    const auto& node = g_.processes[proc];
    for (auto p : node.prefixes) {
      prefix(out, p);
      out += '.';
    }
    out += c_.marked(node.end) ? "{0}" : "0";
  }

  void prefix(std::string& out, PlaceId p) const {
    const auto& place = g_.places[p];
    const bool marked = c_.marked(p);
    const auto wrap = [&](const std::string& s) { return marked ? "{" + s + "}" : s; };
    switch (place.type) {
      case PlaceType::Silent: out += wrap("tau"); break;
      case PlaceType::Output: out += wrap(box(*place.out) + "!<" + box(*place.data) + ">"); break;
      case PlaceType::Input: out += wrap(box(*place.in) + "?(" + box(*place.data) + ")"); break;
      case PlaceType::Match: out += wrap("[" + box(*place.data) + "=" + box(*place.data2) + "]"); break;
      case PlaceType::Sum:
      case PlaceType::Par: {
        const bool is_sum = place.type == PlaceType::Sum;
        out += wrap(is_sum ? "sum" : "par");
        out += "{ ";
        for (std::size_t i = 0; i < place.branches.size(); ++i) {
          if (i > 0) out += is_sum ? " + " : " || ";
          process(out, place.branches[i]);
        }
        out += " }";
        break;
      }
      default: break;
    }
  }

  const Configuration& c_;
  const StaticGraph& g_;
};

}  // namespace detail

/// Term-with-frames rendering: `κ;γ |- *[ ... ]`, each ∘-marked redex in
/// braces, instantiations shown as `box|value` when they differ from the box.
inline std::string render(const Configuration& c) { return detail::Renderer(c).run(); }

}  // namespace pigraph
