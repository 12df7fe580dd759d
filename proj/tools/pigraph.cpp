#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace pigraph;
  using namespace pigraph::cli;

  CLI::App app{"pigraph: pi-graph models, transition systems and bisimilarity"};
  app.require_subcommand(1);

  RunConfig cfg;
  cfg.max_states = max_states_from_env();

  const std::map<std::string, ClockModel> clocks{{"logical", ClockModel::Logical},
                                                 {"causal", ClockModel::Causal}};
  const std::map<std::string, GcMode> gcs{
      {"step", GcMode::Step}, {"obs", GcMode::Obs}, {"off", GcMode::Off}};
  const std::map<std::string, Format> formats{{"dot", Format::Dot}, {"json", Format::Json}};

  const auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--clock", cfg.clock, "clock model")
        ->transform(CLI::CheckedTransformer(clocks, CLI::ignore_case));
    cmd->add_option("--gc", cfg.gc, "garbage collection point (causal clocks only)")
        ->transform(CLI::CheckedTransformer(gcs, CLI::ignore_case));
    cmd->add_option("--max-states", cfg.max_states, "exploration guard")
        ->check(CLI::PositiveNumber);
  };

  std::string file, other;

  auto* check = app.add_subcommand("check", "parse and compile a model");
  check->add_option("file", file)->required();

  auto* bound = app.add_subcommand("bound", "print the static epsilon bound");
  bound->add_option("file", file)->required();

  auto* trace = app.add_subcommand("trace", "replay observable transitions");
  trace->add_option("file", file)->required();
  add_run_flags(trace);
  trace->add_option("--steps", cfg.steps, "number of transitions");
  trace->add_option("--seed", cfg.seed, "seed for choosing among transitions");

  auto* lts = app.add_subcommand("lts", "build and export the transition system");
  lts->add_option("file", file)->required();
  add_run_flags(lts);
  lts->add_option("--format", cfg.format, "dot or json")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  lts->add_option("-o,--output", cfg.output, "output file (default: stdout)");

  auto* bisim = app.add_subcommand("bisim", "decide strong bisimilarity of two models");
  bisim->add_option("left", file)->required();
  bisim->add_option("right", other)->required();
  add_run_flags(bisim);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : failure;
  }

  if (*check) return cmd_check(file, std::cout, std::cerr);
  if (*bound) return cmd_bound(file, std::cout, std::cerr);
  if (*trace) return cmd_trace(file, cfg, std::cout, std::cerr);
  if (*lts) return cmd_lts(file, cfg, std::cout, std::cerr);
  if (*bisim) return cmd_bisim(file, other, cfg, std::cout, std::cerr);
  return failure;
}
