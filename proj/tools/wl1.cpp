// Command-line driver: weights | volumes | phase | descend | histogram.
#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <functional>
#include <iostream>
#include <string>

#include "wl1/harness.hpp"

namespace {

struct SharedFlags {
  std::string configPath;
  std::string outDir;
  std::uint64_t seed = 0;
  int workers = 0;
  double successTol = 0.0;
  double lpTol = 0.0;
  bool seedSet = false, workersSet = false, outSet = false, successSet = false, lpSet = false;
};

void addShared(CLI::App* cmd, SharedFlags& flags) {
  cmd->add_option("--config", flags.configPath, "experiment configuration file")->required();
  cmd->add_option("--seed", flags.seed, "master seed (overrides config)")
      ->each([&](const std::string&) { flags.seedSet = true; });
  cmd->add_option("--workers", flags.workers, "worker threads (overrides config)")
      ->each([&](const std::string&) { flags.workersSet = true; });
  cmd->add_option("--out", flags.outDir, "output directory (overrides config)")
      ->each([&](const std::string&) { flags.outSet = true; });
  cmd->add_option("--success-tol", flags.successTol, "recovery success tolerance")
      ->each([&](const std::string&) { flags.successSet = true; });
  cmd->add_option("--lp-tol", flags.lpTol, "LP solver KKT tolerance")
      ->each([&](const std::string&) { flags.lpSet = true; });
}

wl1::ExperimentConfig loadWithOverrides(const SharedFlags& flags) {
  wl1::ExperimentConfig cfg = wl1::loadExperiment(flags.configPath);
  if (flags.seedSet) cfg.seed = flags.seed;
  if (flags.workersSet) cfg.workers = flags.workers;
  if (flags.outSet) cfg.outDir = flags.outDir;
  if (flags.successSet) cfg.successTol = flags.successTol;
  if (flags.lpSet) cfg.lpTol = flags.lpTol;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted-l1 descent-cone toolkit"};
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
    std::function<int(const wl1::ExperimentConfig&)> run;
  };
  const Command commands[] = {
      {"weights", "closed-form weights from support marginals", wl1::cmdWeights},
      {"volumes", "expected intrinsic volumes by Monte Carlo", wl1::cmdVolumes},
      {"phase", "recovery frequency sweep with kinematic prediction", wl1::cmdPhase},
      {"descend", "stochastic gradient descent on the expected statistical dimension",
       wl1::cmdDescend},
      {"histogram", "per-support statistical-dimension histogram", wl1::cmdHistogram},
  };

  SharedFlags flags[std::size(commands)];
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i].name, commands[i].help);
    addShared(sub, flags[i]);
    sub->callback([&, i] {
      const wl1::ExperimentConfig cfg = loadWithOverrides(flags[i]);
      std::exit(commands[i].run(cfg));
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
