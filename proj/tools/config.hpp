#pragma once

#include <string>
#include <vector>

namespace acyl::cli {

/// Expands "--config FILE" into flags. The JSON object's keys are flag names
/// ("cutoff": 2.5 -> --cutoff=2.5; arrays join with commas; true -> bare
/// flag); an optional "command" key supplies the subcommand. File entries are
/// placed before the command-line flags, so the command line wins.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

}  // namespace acyl::cli
