#pragma once

#include "magbell/config.hpp"

#include <string>
#include <vector>

namespace magbell {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNonConvergence = 3;
inline constexpr int kExitIo = 4;

int cmd_swap(const ExperimentConfig& cfg, const std::string& out_dir);
int cmd_purity(const ExperimentConfig& cfg, const std::string& out_dir);
int cmd_crossing(const ExperimentConfig& cfg, const std::string& out_dir);
int cmd_generate(const ExperimentConfig& cfg, const std::string& out_dir);
int cmd_reconstruct(const std::string& dataset_path, const ExperimentConfig& cfg,
                    const std::string& out_dir);
int cmd_sweep_truncation(const ExperimentConfig& cfg, const std::vector<int>& n_max_list,
                         const std::string& out_dir);

/// Full argument parsing and exit-code mapping for the command-line tool.
int run_cli(int argc, const char* const* argv);

}  // namespace magbell
