#pragma once

#include <string>

#include "run_config.hpp"

namespace entflow::cli {

int cmd_simulate(RunConfig config, const std::string& dump_hamiltonian);
int cmd_sweep(RunConfig config);
int cmd_fit(RunConfig config, const std::string& dataset_path);
int cmd_kan(RunConfig config, const std::string& action, const std::string& dataset_path,
            const std::string& checkpoint_path);
int cmd_presets();

}  // namespace entflow::cli
