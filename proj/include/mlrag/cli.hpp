#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace mlrag {

// Flat key-value run configuration: one `key = value` per line, `#` starts
// a comment. Keys mirror the run flags; a flag given on the command line
// always wins over the file value. Unknown keys are usage errors so typos
// cannot silently fall back to defaults.
std::map<std::string, std::string> load_config_file(const std::filesystem::path& path);

// Full command-line entry point. Never throws; errors map to the exit
// contract: 0 success, 1 usage, 2 data or validation, 3 provider failure.
// Logs go to stderr, machine-readable output to stdout and files.
int run_cli(int argc, const char* const* argv);

}  // namespace mlrag
