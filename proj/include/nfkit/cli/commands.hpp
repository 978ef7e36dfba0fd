#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "nfkit/cli/config.hpp"

namespace nfkit::cli {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitInfeasible = 3, kExitNumeric = 4 };

// Each command writes its primary output to `out` and any side files named in
// the config. Library exceptions propagate; run_command maps them to exit codes.
int cmd_fraunhofer(const RunConfig& config, std::ostream& out);
int cmd_coverage(const RunConfig& config, std::ostream& out);
int cmd_focus_profile(const RunConfig& config, std::ostream& out);
int cmd_focus_solve(const RunConfig& config, std::ostream& out);
int cmd_kappa(const RunConfig& config, std::ostream& out);
int cmd_nonrad(const RunConfig& config, std::ostream& out);

std::vector<std::string> command_names();

// Dispatches by name, opens config.out_path (or uses `fallback`), and turns
// exceptions into exit codes with a message on `err`.
int run_command(const std::string& name, const RunConfig& config, std::ostream& fallback, std::ostream& err);

// Full CLI entry point (argument parsing included).
int main_entry(int argc, char** argv);

} // namespace nfkit::cli
