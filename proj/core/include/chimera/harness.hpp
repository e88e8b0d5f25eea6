#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "chimera/run_config.hpp"

namespace chimera {

// Command entry points shared by the CLI and the tests.  Each writes its
// artifacts under out_dir and returns the JSON summary text that was also
// written there.  Output bytes depend only on config + seed.

std::string cmd_simulate_network(const run_config& cfg,
                                 const std::filesystem::path& out_dir);
std::string cmd_simulate_meanfield(const run_config& cfg,
                                   const std::filesystem::path& out_dir);
std::string cmd_manifold(const run_config& cfg,
                         const std::filesystem::path& out_dir);
std::string cmd_compare(const run_config& cfg,
                        const std::filesystem::path& out_dir);
std::string cmd_sweep(const run_config& cfg, const std::string& axis,
                      const std::vector<double>& values,
                      const std::filesystem::path& out_dir);

void write_trajectory_csv(const std::filesystem::path& file,
                          const trajectory& traj);

} // namespace chimera
