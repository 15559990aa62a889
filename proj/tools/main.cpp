#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "commands.hpp"
#include "config.hpp"
#include "treesir/version.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::vector<std::string> sets;
  std::string out;
  std::string format;
  int workers = 0;
};

void add_common(CLI::App* sub, CommonFlags& flags) {
  sub->add_option("--config", flags.config_path, "key=value config file");
  sub->add_option("--set", flags.sets, "override a config key (repeatable, later wins)");
  sub->add_option("--out", flags.out, "output path prefix");
  sub->add_option("--format", flags.format, "report format: csv|json");
  sub->add_option("--workers", flags.workers, "sweep worker count");
}

treesir::cli::RunConfig resolve(const CommonFlags& flags, treesir::cli::Experiment exp) {
  treesir::cli::RunConfig cfg;
  if (!flags.config_path.empty()) treesir::cli::apply_config_file(cfg, flags.config_path);
  for (const std::string& s : flags.sets) treesir::cli::apply_set_flag(cfg, s);
  if (!flags.out.empty()) cfg.out = flags.out;
  if (!flags.format.empty())
    treesir::cli::apply_key_value(cfg, "format", flags.format, "--format");
  if (flags.workers > 0) cfg.workers = flags.workers;
  cfg.experiment = exp;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace treesir::cli;

  CLI::App app{"SIR epidemics on the integer lattice and on homogeneous trees: "
               "simulation, stationary profiles, and spreading speeds"};
  app.set_version_flag("--version", treesir::kVersion);
  app.require_subcommand(1);

  struct Sub {
    Experiment exp;
    CLI::App* cmd;
    CommonFlags flags;
  };
  std::vector<Sub> subs;
  subs.push_back({Experiment::Simulate,
                  app.add_subcommand("derive", "print closed-form derived quantities"),
                  {}});
  subs.push_back({Experiment::Simulate,
                  app.add_subcommand("simulate", "integrate the dynamics, write a trajectory CSV"),
                  {}});
  subs.push_back({Experiment::Stationary,
                  app.add_subcommand("stationary", "march to the stationary profile and classify its tail"),
                  {}});
  subs.push_back({Experiment::Speed,
                  app.add_subcommand("speed", "analytic (and optionally empirical) spreading speed"),
                  {}});
  subs.push_back({Experiment::Sweep,
                  app.add_subcommand("sweep", "speed vs exchange strength over a degree list"),
                  {}});
  subs.push_back({Experiment::Check,
                  app.add_subcommand("check", "run the invariant battery, exit nonzero on failure"),
                  {}});
  for (auto& s : subs) add_common(s.cmd, s.flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (subs[0].cmd->parsed())
      return cmd_derive(resolve(subs[0].flags, Experiment::Simulate), std::cout);
    if (subs[1].cmd->parsed())
      return cmd_simulate(resolve(subs[1].flags, Experiment::Simulate), std::cout);
    if (subs[2].cmd->parsed())
      return cmd_stationary(resolve(subs[2].flags, Experiment::Stationary), std::cout);
    if (subs[3].cmd->parsed())
      return cmd_speed(resolve(subs[3].flags, Experiment::Speed), std::cout);
    if (subs[4].cmd->parsed())
      return cmd_sweep(resolve(subs[4].flags, Experiment::Sweep), std::cout);
    if (subs[5].cmd->parsed())
      return cmd_check(resolve(subs[5].flags, Experiment::Check), std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for_current_exception();
  }
  return 2;
}
