#pragma once

// Hand-rolled random generators: well-formed ASTs and small labelled graphs.

#include <random>
#include <string>
#include <vector>

#include "pigraph/pigraph.hpp"

namespace pigraph::testing {

struct AstShape {
  int iterators = 2;
  int depth = 2;        // nesting of sum/par
  int max_prefixes = 3; // per process
};

class AstGenerator {
 public:
  explicit AstGenerator(std::uint64_t seed, AstShape shape = {}) : rng_(seed), shape_(shape) {}

  GraphAst graph() {
    GraphAst g;
    const int frees = pick(1, 3);
    for (int i = 0; i < frees; ++i) g.free_names.push_back(ref("f" + std::to_string(i)));
    if (pick(0, 1)) g.restrictions.push_back(ref("R"));
    const int iters = pick(1, shape_.iterators);
    for (int k = 0; k < iters; ++k) {
      IteratorAst it;
      const int privs = pick(0, 2), binds = pick(0, 2);
      for (int i = 0; i < privs; ++i) it.privates.push_back(ref("p" + std::to_string(k) + "_" + std::to_string(i)));
      for (int i = 0; i < binds; ++i) it.binders.push_back(ref("x" + std::to_string(k) + "_" + std::to_string(i)));
      scope_.clear();
      binders_.clear();
      for (const auto& r : g.free_names) scope_.push_back(r.ident);
      for (const auto& r : g.restrictions) scope_.push_back(r.ident);
      for (const auto& r : it.privates) scope_.push_back(r.ident);
      for (const auto& r : it.binders) {
        scope_.push_back(r.ident);
        binders_.push_back(r.ident);
      }
      it.body = pick(0, 9) == 0 ? ProcessAst{} : process(shape_.depth);
      g.iterators.push_back(std::move(it));
    }
    return g;
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  static NameRef ref(std::string ident) { return NameRef{std::move(ident), {}, std::nullopt}; }

  NameRef any() { return ref(scope_[static_cast<std::size_t>(pick(0, static_cast<int>(scope_.size()) - 1))]); }

  ProcessAst process(int depth) {
    ProcessAst p;
    const int n = pick(1, shape_.max_prefixes);
    for (int i = 0; i < n; ++i) p.prefixes.push_back(prefix(depth));
    // A match cannot close a process.
    if (std::holds_alternative<MatchAst>(p.prefixes.back().node)) p.prefixes.push_back({SilentAst{}, {}});
    return p;
  }

  PrefixAst prefix(int depth) {
    const int choice = pick(0, depth > 0 ? 5 : 3);
    switch (choice) {
      case 0: return {SilentAst{}, {}};
      case 1: return {OutputAst{any(), any()}, {}};
      case 2:
        if (binders_.empty()) return {OutputAst{any(), any()}, {}};
        return {InputAst{any(), ref(binders_[static_cast<std::size_t>(pick(0, static_cast<int>(binders_.size()) - 1))])}, {}};
      case 3: return {MatchAst{any(), any()}, {}};
      default: {
        std::vector<ProcessAst> branches;
        const int k = pick(2, 3);
        for (int i = 0; i < k; ++i) branches.push_back(process(depth - 1));
        if (choice == 4) return {SumAst{std::move(branches)}, {}};
        return {ParAst{std::move(branches)}, {}};
      }
    }
  }

  std::mt19937_64 rng_;
  AstShape shape_;
  std::vector<std::string> scope_;
  std::vector<std::string> binders_;
};

/// Random transition system over a small label alphabet, as an LtsSummary.
inline LtsSummary random_lts(std::mt19937_64& rng, std::size_t states, std::size_t edges,
                             std::size_t labels) {
  LtsSummary s;
  for (std::size_t i = 0; i < states; ++i) {
    s.keys.push_back("k" + std::to_string(i));
    s.terms.push_back("");
    s.clocks.push_back(nullptr);
  }
  for (std::size_t e = 0; e < edges; ++e)
    s.transitions.push_back({rng() % states, "l" + std::to_string(rng() % labels), rng() % states});
  std::sort(s.transitions.begin(), s.transitions.end(), [](const auto& a, const auto& b) {
    return std::tie(a.source, a.label, a.target) < std::tie(b.source, b.label, b.target);
  });
  s.transitions.erase(std::unique(s.transitions.begin(), s.transitions.end()), s.transitions.end());
  return s;
}

}  // namespace pigraph::testing
