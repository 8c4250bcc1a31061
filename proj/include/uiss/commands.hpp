#pragma once

// CLI workflows. Each command reads the files named in the config, writes
// its outputs into config "out" atomically, and finishes with a manifest
// (manifest_<command>.txt) holding the full configuration that reproduces
// the run. Outputs carry no timestamps, so reruns are byte-identical.

#include "uiss/config.hpp"

#include <string>
#include <vector>

namespace uiss::cli {

// Returns the paths written, manifest last.
std::vector<std::string> cmd_synth(const config::RunConfig& cfg);
std::vector<std::string> cmd_fit(const config::RunConfig& cfg);
std::vector<std::string> cmd_rank(const config::RunConfig& cfg);
std::vector<std::string> cmd_eval(const config::RunConfig& cfg);
std::vector<std::string> cmd_embed(const config::RunConfig& cfg);

std::vector<std::string> run_command(const std::string& name, const config::RunConfig& cfg);

}  // namespace uiss::cli
