#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wrckit::cli {

// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kDataError = 3,
  kNumericFailure = 4,
};

// Maps an Error code to the exit code contract.
int exit_code_for(const std::string& error_code);

// Reads `key = value` lines ('#' starts a comment). Keys are option names
// without the leading dashes, e.g. `wrc.tau` or `train.epochs`.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

// Full command line entry point: `args` excludes the program name.
// Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wrckit::cli
