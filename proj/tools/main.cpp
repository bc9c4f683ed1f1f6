#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"
#include "run_config.hpp"

namespace {

using entflow::cli::RunConfig;

struct CommonFlags {
  std::string preset;
  std::string config_file;
  std::string out_dir;
  long long seed = -1;
  int workers = 0;
  bool plot = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--preset", flags.preset, "start from a named preset (see 'entflow presets')");
  cmd->add_option("--config", flags.config_file, "key = value config file overlay");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--seed", flags.seed, "seed for stochastic stages");
  cmd->add_option("--workers", flags.workers, "worker threads for sweeps");
  cmd->add_flag("--plot", flags.plot, "emit SVG plots next to the CSV outputs");
}

RunConfig resolve(const CommonFlags& flags) {
  RunConfig config = flags.preset.empty() ? RunConfig{} : entflow::cli::preset(flags.preset);
  if (!flags.config_file.empty()) config.apply_file(flags.config_file);
  if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
  if (flags.seed >= 0) config.seed = static_cast<std::uint64_t>(flags.seed);
  if (flags.workers > 0) config.workers = flags.workers;
  if (flags.plot) config.plot = true;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entflow: entanglement-transport simulations on a barrier-split Hubbard chain"};
  app.require_subcommand(1);

  CommonFlags sim_flags, sweep_flags, fit_flags, kan_flags;
  std::string dump_hamiltonian, fit_dataset, kan_dataset, kan_checkpoint, kan_action;

  CLI::App* sim = app.add_subcommand("simulate", "run one trajectory and write (t, n_A, S_A)");
  add_common(sim, sim_flags);
  sim->add_option("--dump-hamiltonian", dump_hamiltonian,
                  "also write the sparse Hamiltonian as 'row col value' lines");

  CLI::App* sweep = app.add_subcommand("sweep", "run a (U, h) grid and write the dataset");
  add_common(sweep, sweep_flags);

  CLI::App* fit = app.add_subcommand("fit", "binary-entropy (and optional spline) fits per group");
  add_common(fit, fit_flags);
  fit->add_option("--dataset", fit_dataset, "dataset CSV to fit")->required();

  CLI::App* kan = app.add_subcommand("kan", "train / cross-validate / evaluate the spline network");
  add_common(kan, kan_flags);
  kan->add_option("action", kan_action, "train, cv or eval")->required();
  kan->add_option("--dataset", kan_dataset, "dataset CSV")->required();
  kan->add_option("--checkpoint", kan_checkpoint, "checkpoint path (output for train, input for eval)");

  CLI::App* presets = app.add_subcommand("presets", "list the built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (presets->parsed()) return entflow::cli::cmd_presets();
    if (sim->parsed()) return entflow::cli::cmd_simulate(resolve(sim_flags), dump_hamiltonian);
    if (sweep->parsed()) return entflow::cli::cmd_sweep(resolve(sweep_flags));
    if (fit->parsed()) return entflow::cli::cmd_fit(resolve(fit_flags), fit_dataset);
    if (kan->parsed())
      return entflow::cli::cmd_kan(resolve(kan_flags), kan_action, kan_dataset, kan_checkpoint);
  } catch (const entflow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const entflow::NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
