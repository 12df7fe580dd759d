#pragma once

// Command implementations behind the `pigraph` executable.  They write to the
// given streams and return the process exit code, so tests can drive them
// without spawning processes.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "pigraph/pigraph.hpp"

namespace pigraph::cli {

enum ExitCode : int { ok = 0, differ = 1, failure = 2 };

enum class Format { Dot, Json };

struct RunConfig {
  ClockModel clock = ClockModel::Causal;
  GcMode gc = GcMode::Step;
  std::size_t max_states = default_max_states;
  std::uint64_t seed = 0;
  std::size_t steps = 10;
  Format format = Format::Dot;
  std::string output;

  // gc only applies to causal clocks.
  GcMode effective_gc() const { return clock == ClockModel::Logical ? GcMode::Off : gc; }
};

/// Default guard, overridable through PIGRAPH_MAX_STATES.
inline std::size_t max_states_from_env() {
  if (const char* env = std::getenv("PIGRAPH_MAX_STATES")) {
    try {
      const auto v = std::stoull(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return default_max_states;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace detail {

struct Model {
  GraphAst ast;
  Configuration initial;
};

inline Model load(const std::string& path, ClockModel clock) {
  const auto text = read_file(path);
  try {
    auto ast = parse(text);
    auto initial = compile(ast, clock);
    return {std::move(ast), std::move(initial)};
  } catch (const SourceError& e) {
    throw std::runtime_error(path + ":" + e.what());
  }
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return failure;
  }
}

}  // namespace detail

inline int cmd_check(const std::string& path, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto m = detail::load(path, ClockModel::Causal);
    out << "ok: " << m.initial.graph->places.size() << " places, "
        << m.initial.graph->boxes.size() << " boxes, eps-bound " << epsilon_bound(m.ast) << "\n";
    return ok;
  });
}

inline int cmd_bound(const std::string& path, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto m = detail::load(path, ClockModel::Causal);
    out << epsilon_bound(m.ast) << "\n";
    return ok;
  });
}

/// Replays up to `steps` observable transitions, picking among enabled ones
/// with a seeded generator.  Prints `blocked` when nothing is enabled.
inline int cmd_trace(const std::string& path, const RunConfig& cfg, std::ostream& out,
                     std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto m = detail::load(path, cfg.clock);
    const EngineOptions opts{cfg.effective_gc(), 0};
    auto current = opts.gc == GcMode::Off ? m.initial : gc(m.initial);
    std::mt19937_64 rng(cfg.seed);
    out << "   " << render(current) << "\n";
    for (std::size_t i = 0; i < cfg.steps; ++i) {
      auto steps = observable_steps(current, opts);
      if (steps.empty()) {
        out << "blocked\n";
        break;
      }
      std::sort(steps.begin(), steps.end(), [](const Step& a, const Step& b) {
        return std::make_pair(a.label.str(), state_key(a.target)) <
               std::make_pair(b.label.str(), state_key(b.target));
      });
      auto& chosen = steps[steps.size() == 1 ? 0 : rng() % steps.size()];
      out << chosen.label.str() << "  ->  " << render(chosen.target) << "\n";
      current = std::move(chosen.target);
    }
    return ok;
  });
}

inline int cmd_lts(const std::string& path, const RunConfig& cfg, std::ostream& out,
                   std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto m = detail::load(path, cfg.clock);
    const auto lts = build_lts(m.initial, {cfg.max_states, cfg.effective_gc()});
    const auto text = cfg.format == Format::Dot ? export_dot(lts) : export_json(lts);
    const std::string stats = "states=" + std::to_string(lts.state_count()) +
                              " transitions=" + std::to_string(lts.transitions.size()) +
                              " truncated=" + (lts.truncated ? "true" : "false") + "\n";
    if (cfg.output.empty()) {
      out << text;
      err << stats;
    } else {
      std::ofstream file(cfg.output, std::ios::binary);
      if (!file) throw std::runtime_error("cannot write " + cfg.output);
      file << text;
      out << stats;
    }
    return ok;
  });
}

/// Exit 0 when bisimilar, 1 with a witness when not, 2 on error.
inline int cmd_bisim(const std::string& left, const std::string& right, const RunConfig& cfg,
                     std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const LtsOptions opts{cfg.max_states, cfg.effective_gc()};
    const auto a = build_lts(detail::load(left, cfg.clock).initial, opts);
    const auto b = build_lts(detail::load(right, cfg.clock).initial, opts);
    const auto verdict = bisimilar(a, b);
    if (verdict.bisimilar) {
      out << "bisimilar\n";
      return ok;
    }
    out << "not bisimilar\n";
    for (const auto& w : verdict.witness)
      out << (w.side == Side::Left ? "L: " : "R: ") << w.label << "\n";
    if (!verdict.witness.empty()) {
      const auto& last = verdict.witness.back();
      out << "unmatched by " << (last.side == Side::Left ? "R" : "L") << "\n";
    }
    return differ;
  });
}

}  // namespace pigraph::cli
