#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pigraph/errors.hpp"
#include "pigraph/name.hpp"

namespace pigraph {

// Spans are diagnostics only and never take part in AST equality.

struct NameRef {
  std::string ident;
  SourceSpan span;
  // Sigil written in the source ('$', '^', '?'), if any.
  std::optional<char> sigil;

  friend bool operator==(const NameRef& a, const NameRef& b) { return a.ident == b.ident; }
};

struct ProcessAst;

struct SilentAst {
  friend bool operator==(const SilentAst&, const SilentAst&) = default;
};
struct OutputAst {
  NameRef channel;
  NameRef datum;
  friend bool operator==(const OutputAst&, const OutputAst&) = default;
};
struct InputAst {
  NameRef channel;
  NameRef binder;
  friend bool operator==(const InputAst&, const InputAst&) = default;
};
struct MatchAst {
  NameRef left;
  NameRef right;
  friend bool operator==(const MatchAst&, const MatchAst&) = default;
};
struct SumAst {
  std::vector<ProcessAst> branches;
  friend bool operator==(const SumAst&, const SumAst&) = default;
};
struct ParAst {
  std::vector<ProcessAst> branches;
  friend bool operator==(const ParAst&, const ParAst&) = default;
};

struct PrefixAst {
  std::variant<SilentAst, OutputAst, InputAst, MatchAst, SumAst, ParAst> node;
  SourceSpan span;

  friend bool operator==(const PrefixAst& a, const PrefixAst& b) { return a.node == b.node; }
};

/// A prefix sequence closed by the terminator `0`, which is implicit here.
struct ProcessAst {
  std::vector<PrefixAst> prefixes;
  SourceSpan span;

  friend bool operator==(const ProcessAst& a, const ProcessAst& b) {
    return a.prefixes == b.prefixes;
  }
};

struct IteratorAst {
  std::vector<NameRef> privates;
  std::vector<NameRef> binders;
  ProcessAst body;
  SourceSpan span;

  friend bool operator==(const IteratorAst& a, const IteratorAst& b) {
    return a.privates == b.privates && a.binders == b.binders && a.body == b.body;
  }
};

struct GraphAst {
  std::vector<NameRef> free_names;
  std::vector<NameRef> restrictions;
  std::vector<IteratorAst> iterators;

  friend bool operator==(const GraphAst&, const GraphAst&) = default;
};

/// Kind of a name referenced from inside iterator `iter`, by declaration
/// lookup (iterator-local lists first, then globals).
inline std::optional<Name> resolve_name(const GraphAst& g, std::size_t iter,
                                        const std::string& ident) {
  const auto& it = g.iterators.at(iter);
  for (const auto& r : it.privates)
    if (r.ident == ident) return Name::priv(ident);
  for (const auto& r : it.binders)
    if (r.ident == ident) return Name::binder(ident);
  for (const auto& r : g.free_names)
    if (r.ident == ident) return Name::free(ident);
  for (const auto& r : g.restrictions)
    if (r.ident == ident) return Name::restriction(ident);
  return std::nullopt;
}

namespace detail {

inline void print_list(std::string& out, const char* keyword, const std::vector<NameRef>& names) {
  out += keyword;
  out += '(';
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += ", ";
    out += names[i].ident;
  }
  out += ')';
}

inline void print_process(std::string& out, const ProcessAst& p);

inline void print_prefix(std::string& out, const PrefixAst& prefix) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, SilentAst>) {
          out += "tau";
        } else if constexpr (std::is_same_v<T, OutputAst>) {
          out += node.channel.ident + "!<" + node.datum.ident + ">";
        } else if constexpr (std::is_same_v<T, InputAst>) {
          out += node.channel.ident + "?(" + node.binder.ident + ")";
        } else if constexpr (std::is_same_v<T, MatchAst>) {
          out += "[" + node.left.ident + "=" + node.right.ident + "]";
        } else {
          constexpr bool is_sum = std::is_same_v<T, SumAst>;
          out += is_sum ? "sum{ " : "par{ ";
          for (std::size_t i = 0; i < node.branches.size(); ++i) {
            if (i > 0) out += is_sum ? " + " : " || ";
            print_process(out, node.branches[i]);
          }
          out += " }";
        }
      },
      prefix.node);
}

inline void print_process(std::string& out, const ProcessAst& p) {
  for (const auto& prefix : p.prefixes) {
    print_prefix(out, prefix);
    out += '.';
  }
  out += '0';
}

}  // namespace detail

/// Source text for an AST, in the concrete grammar accepted by `parse`.
inline std::string print_ast(const GraphAst& g) {
  std::string out;
  detail::print_list(out, "free", g.free_names);
  out += ' ';
  detail::print_list(out, "restr", g.restrictions);
  for (std::size_t i = 0; i < g.iterators.size(); ++i) {
    const auto& it = g.iterators[i];
    out += i == 0 ? " " : " || ";
    out += "*[ ";
    detail::print_list(out, "priv", it.privates);
    out += ' ';
    detail::print_list(out, "bind", it.binders);
    out += ' ';
    detail::print_process(out, it.body);
    out += " ]";
  }
  return out;
}

}  // namespace pigraph
