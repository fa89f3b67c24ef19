#include <CLI11.hpp>
#include <iostream>

#include "imgep/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Intrinsically motivated goal exploration: run, evaluate, demo"};
  app.require_subcommand(1);

  imgep::RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run one exploration experiment");
  std::string config, out;
  run_cmd->add_option("--config", config, "Configuration file (key = value)");
  run_cmd->add_option("--condition", run.condition, "RANDOM, RMB, SGS, FC or AMB");
  run_cmd->add_option("--iterations", run.iterations, "Number of episodes");
  run_cmd->add_option("--seed", run.seed, "Random seed");
  run_cmd->add_option("--env", run.env, "Environment id (tool_use)");
  run_cmd->add_option("--out", out, "Artifact directory (default: $IMGEP_OUTPUT_ROOT/<condition>_seed<seed>)");
  run_cmd->add_option("--snapshot-every", run.snapshot_every, "Archive snapshot cadence in episodes");
  run_cmd->add_option("--set", run.overrides, "Config override key=value (repeatable)");

  imgep::EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Compute metrics for one or more artifact directories");
  eval_cmd->add_option("dirs", eval.dirs, "Artifact directories")->required();
  eval_cmd->add_option("--test-samples", eval.test_samples, "Monte-Carlo samples per space");
  eval_cmd->add_option("--space", eval.space, "Space id, name or 'all'");
  eval_cmd->add_option("--seed", eval.seed, "Seed of the test distribution");
  std::string table;
  eval_cmd->add_option("--table", table, "Also write the combined table to this file");

  imgep::DemoOptions demo;
  auto* demo_cmd = app.add_subcommand("demo-bandit", "Learning-progress bandit on scripted learning curves");
  std::string demo_out = demo.out.string();
  demo_cmd->add_option("--out", demo_out, "Trace file");
  demo_cmd->add_option("--seed", demo.seed, "Random seed");
  demo_cmd->add_option("--steps", demo.steps, "Number of selections");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? imgep::kExitOk : imgep::kExitConfigError;
  }

  if (*run_cmd) {
    if (!config.empty()) run.config = config;
    if (!out.empty()) run.out = out;
    return imgep::cmd_run(run, std::cout, std::cerr);
  }
  if (*eval_cmd) {
    if (!table.empty()) eval.table = table;
    return imgep::cmd_eval(eval, std::cout, std::cerr);
  }
  demo.out = demo_out;
  return imgep::cmd_demo_bandit(demo, std::cout, std::cerr);
}
