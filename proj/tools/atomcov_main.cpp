#include <string>
#include <vector>

#include <CLI11.hpp>

#include "atomcov/cli.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  int jobs = atomcov::default_jobs();
};

void add_common(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("-c,--config", args->config_path, "JSON config file")->required();
  cmd->add_option("--set", args->overrides, "Override a config entry, e.g. --set options.seed=3");
  cmd->add_option("-j,--jobs", args->jobs, "Worker threads for Monte-Carlo trials");
}

int load_and_run(const CommonArgs& args,
                 const std::function<int(const nlohmann::json&, int)>& runner) {
  try {
    nlohmann::json config = atomcov::load_config(args.config_path);
    for (const auto& ov : args.overrides) atomcov::apply_override(config, ov);
    return runner(config, args.jobs);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured covariance estimation toolkit"};
  app.require_subcommand(1);

  CommonArgs est_args, sim_args, crb_args;
  CommonArgs bench_args;
  std::string bench_task;

  CLI::App* est = app.add_subcommand("estimate", "Fit a covariance estimate from snapshots");
  add_common(est, &est_args);

  CLI::App* sim = app.add_subcommand("simulate", "Generate snapshots from a covariance model");
  add_common(sim, &sim_args);

  CLI::App* bench = app.add_subcommand("bench", "Run an experiment (mse | sinr | convergence)");
  bench->add_option("task", bench_task, "One of: mse, sinr, convergence")->required();
  add_common(bench, &bench_args);

  CLI::App* crb = app.add_subcommand("crb", "Evaluate the estimation bound for a model");
  add_common(crb, &crb_args);

  CLI11_PARSE(app, argc, argv);

  if (est->parsed())
    return load_and_run(est_args, [](const nlohmann::json& c, int jobs) {
      return atomcov::cmd_estimate(c, jobs);
    });
  if (sim->parsed())
    return load_and_run(sim_args, [](const nlohmann::json& c, int) {
      return atomcov::cmd_simulate(c);
    });
  if (bench->parsed())
    return load_and_run(bench_args, [&](const nlohmann::json& c, int jobs) {
      return atomcov::cmd_bench(bench_task, c, jobs);
    });
  if (crb->parsed())
    return load_and_run(crb_args, [](const nlohmann::json& c, int) {
      return atomcov::cmd_crb(c);
    });
  return 1;
}
