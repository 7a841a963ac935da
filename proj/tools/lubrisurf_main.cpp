#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lubrisurf/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Thin-film / soluble-surfactant simulation and stability toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config, out, run_dir, linstab_dir;
  std::optional<uint64_t> seed;
  bool quiet = false;
  app.add_flag("--quiet", quiet, "suppress progress lines");
  app.add_option("--seed", seed, "override the config seed");

  auto* sim = app.add_subcommand("simulate", "run a time integration");
  sim->add_option("--config", config, "config.json path")->required();
  sim->add_option("--out", out, "output directory")->required();

  auto* lin = app.add_subcommand("linstab", "linearized stability analysis");
  lin->add_option("--config", config, "config.json path")->required();
  lin->add_option("--out", out, "output directory")->required();

  auto* cmp = app.add_subcommand("compare", "compare decay rate with spectrum");
  cmp->add_option("--run", run_dir, "simulate output directory")->required();
  cmp->add_option("--linstab", linstab_dir, "linstab output directory")->required();

  auto* swp = app.add_subcommand("sweep", "cartesian parameter sweep");
  swp->add_option("--config", config, "sweep config.json path")->required();
  swp->add_option("--out", out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  using namespace lubrisurf::cli;
  if (sim->parsed()) return cmd_simulate(config, out, seed, quiet);
  if (lin->parsed()) return cmd_linstab(config, out, quiet);
  if (cmp->parsed()) return cmd_compare(run_dir, linstab_dir, quiet);
  if (swp->parsed()) return cmd_sweep(config, out, seed, quiet);
  return kExitConfigError;
}
