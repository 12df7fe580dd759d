// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.  Time limits are wall-clock and pinned below.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>

#include "commands.hpp"
#include "support/support.hpp"

using namespace pigraph;
using namespace pigraph::testing;

namespace {

constexpr double replay_limit_s = 1.0;
constexpr double invariant_limit_s = 30.0;
constexpr double bisim_limit_s = 10.0;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

Name inst_of(const Configuration& c, const Name& box) { return c.inst.at(*c.graph->box_of(box)); }

std::string model(const std::string& name) { return (models_dir() / name).string(); }

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

// Follows the single enabled raw step, checking its label.
Configuration only_step(Outcome& o, const Configuration& c, const std::string& label) {
  const auto steps = raw_steps(c, {GcMode::Off, 0});
  o.require(steps.size() == 1, "expected one enabled step before " + label + ", found " +
                                   std::to_string(steps.size()));
  if (steps.empty()) return c;
  o.require(steps[0].label.str() == label, "expected " + label + ", got " + steps[0].label.str());
  return steps[0].target;
}

Outcome fig3_replay() {
  Outcome o;
  auto c = load("fig3_match.pig", ClockModel::Logical);
  c = only_step(o, c, "eps");
  c = only_step(o, c, "c!<1!>");
  o.require(starts_with(render(c), "1;{} |- "), "after output: " + render(c));
  c = only_step(o, c, "d?(2?)");
  o.require(starts_with(render(c), "2;{} |- "), "after input: " + render(c));
  const auto steps = raw_steps(c, {GcMode::Off, 0});
  o.require(steps.size() == 1 && steps[0].rule == "match", "match step not unique");
  if (!steps.empty()) {
    c = steps[0].target;
    o.require(steps[0].label.is_epsilon(), "match is not an epsilon step");
    o.require(c.gamma == Partition::from_classes({{Name::fresh_out(1), Name::fresh_in(2)}}),
              "partition after match: " + render_partition(c.gamma));
    o.require(starts_with(render(c), "2;{1!,2?} |- "), "after match: " + render(c));
  }

  auto r = load("fig3_match_reversed.pig", ClockModel::Logical);
  r = only_step(o, r, "eps");
  r = only_step(o, r, "d?(1?)");
  r = only_step(o, r, "c!<2!>");
  o.require(raw_steps(r, {GcMode::Off, 0}).empty(), "reversed variant does not block");
  o.require(observable_steps(r, {GcMode::Off, 0}).empty(), "reversed variant has observable moves");
  return o;
}

Outcome fig2_logical() {
  Outcome o;
  auto c = load("fig2_generator.pig", ClockModel::Logical);
  for (const char* expected : {"c!<1!>", "c!<2!>", "c!<3!>"}) {
    const auto steps = observable_steps(c, {GcMode::Off, 0});
    o.require(steps.size() == 1, "observable step not unique");
    if (steps.empty()) return o;
    o.require(steps[0].label.str() == expected, "got " + steps[0].label.str());
    c = steps[0].target;
  }
  const auto lts = build_lts(load("fig2_generator.pig", ClockModel::Logical), {50, GcMode::Off});
  o.require(lts.truncated, "exploration not truncated");
  o.require(lts.state_count() == 50, "states=" + std::to_string(lts.state_count()));
  return o;
}

Outcome fig2_causal() {
  Outcome o;
  const auto lts = build_lts(load("fig2_generator.pig"), {default_max_states, GcMode::Step});
  o.require(!lts.truncated, "truncated");
  o.require(lts.state_count() == 2, "states=" + std::to_string(lts.state_count()));
  o.require(lts.transitions.size() == 2, "transitions=" + std::to_string(lts.transitions.size()));
  bool loop = false;
  for (const auto& t : lts.transitions) {
    o.require(t.label.str() == "c!<1!>", "label " + t.label.str());
    if (t.source == t.target) {
      loop = true;
      o.require(t.source != lts.initial, "self-loop on the initial state");
    }
  }
  o.require(loop, "no self-loop");

  LtsSummary reference;
  reference.keys = {"loop"};
  reference.terms = {""};
  reference.clocks = {nullptr};
  reference.transitions = {{0, "c!<1!>", 0}};
  o.require(bisimilar(lts, reference).bisimilar, "not bisimilar to the one-state loop");
  return o;
}

Outcome fig1_replay() {
  Outcome o;
  auto c = load("fig1_mobility.pig");
  const std::vector<std::pair<Name, Name>> expected{{Name::binder("x"), Name::priv("d")},
                                                    {Name::binder("y"), Name::free("m")}};
  for (const auto& [box, value] : expected) {
    const auto steps = observable_steps(c);
    o.require(steps.size() == 1, "observable step not unique");
    if (steps.empty()) return o;
    o.require(steps[0].label.str() == "tau", "label " + steps[0].label.str());
    c = steps[0].target;
    o.require(inst_of(c, box) == value,
              box.str() + " instantiated to " + inst_of(c, box).str() + ", expected " + value.str());
  }
  o.require(render(c).find("?y|m") != std::string::npos, "final term " + render(c));
  return o;
}

Outcome invariant_suite() {
  Outcome o;
  const auto models = corpus();
  o.require(models.size() >= 10, "corpus has " + std::to_string(models.size()) + " models");
  std::size_t raw = 0;
  for (const auto& m : models) {
    const auto ast = parse(read_model(m));
    const auto rep = check_invariants(compile(ast), epsilon_bound(ast));
    raw += rep.raw_states;
    o.require(rep.violations.empty(),
              m + ": " + (rep.violations.empty() ? "" : rep.violations.front()));
  }
  if (o.ok) o.detail = std::to_string(models.size()) + " models, " + std::to_string(raw) + " raw states";
  return o;
}

Outcome finiteness() {
  Outcome o;
  for (const auto& m : corpus()) {
    const auto lts = build_lts(load(m));
    o.require(!lts.truncated, m + " truncated");
  }
  return o;
}

Outcome bisimilarity() {
  Outcome o;
  cli::RunConfig cfg;
  std::ostringstream out, err;
  for (const auto& m : corpus()) {
    const int code = cli::cmd_bisim(model(m), model(m), cfg, out, err);
    o.require(code == cli::ok, m + " not bisimilar to itself (exit " + std::to_string(code) + ")");
  }

  std::ostringstream pair_out;
  const int code =
      cli::cmd_bisim(model("discriminate_left.pig"), model("discriminate_right.pig"), cfg, pair_out, err);
  o.require(code == cli::differ, "discrimination pair exit " + std::to_string(code));
  const auto text = pair_out.str();
  const auto last_move = text.rfind("L: ");
  const auto last_r = text.rfind("R: ");
  const auto last = last_r == std::string::npos || (last_move != std::string::npos && last_move > last_r)
                        ? last_move
                        : last_r;
  o.require(last != std::string::npos && text.substr(last + 3, text.find('\n', last) - last - 3) == "b!<d>",
            "witness does not end with b!<d>: " + text);

  o.require(bisimilar(build_lts(load("fig2_generator.pig")), build_lts(load("fig2_generator_alpha.pig")))
                .bisimilar,
            "alpha-variant generators differ");

  std::vector<std::pair<std::string, Lts>> small;
  for (const auto& m : corpus()) {
    auto lts = build_lts(load(m));
    if (lts.state_count() <= 8) small.emplace_back(m, std::move(lts));
  }
  std::size_t pairs = 0;
  for (const auto& [ma, a] : small)
    for (const auto& [mb, b] : small) {
      ++pairs;
      o.require(bisimilar(a, b).bisimilar == brute_force_bisimilar(plain(a), plain(b)),
                "refinement and oracle disagree on " + ma + " vs " + mb);
    }
  if (o.ok) o.detail = std::to_string(pairs) + " oracle pairs";
  return o;
}

Outcome determinism() {
  Outcome o;
  for (const auto& m : corpus()) {
    for (auto format : {cli::Format::Dot, cli::Format::Json}) {
      cli::RunConfig cfg;
      cfg.format = format;
      std::ostringstream a, b, err;
      cli::cmd_lts(model(m), cfg, a, err);
      cli::cmd_lts(model(m), cfg, b, err);
      o.require(!a.str().empty() && a.str() == b.str(), m + " output differs between runs");
    }
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "match replay under logical clocks", replay_limit_s, fig3_replay},
      {2, "generator replay under logical clocks", replay_limit_s, fig2_logical},
      {3, "generator under causal clocks collapses to one class", replay_limit_s, fig2_causal},
      {4, "mobility replay", replay_limit_s, fig1_replay},
      {5, "invariants over the corpus", invariant_limit_s, invariant_suite},
      {6, "finite state spaces under causal clocks", 0, finiteness},
      {7, "bisimilarity verdicts", bisim_limit_s, bisimilarity},
      {8, "deterministic exports", 0, determinism},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0 && secs >= c.limit_s) {
      o.ok = false;
      o.detail = "took " + std::to_string(secs) + " s, limit " + std::to_string(c.limit_s) + " s";
    }
    if (!o.ok) ++failed;
    std::printf("%s criterion %d: %s (%.3f s)%s%s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs,
                o.detail.empty() ? "" : " - ", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
