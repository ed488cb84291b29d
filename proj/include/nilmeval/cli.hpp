#pragma once

#include <string>
#include <vector>

namespace nilmeval {

/**
 * Command-line entry point (subcommands synth, run, score, report).
 *
 * Exit codes: 0 success, 1 usage or configuration error, 2 data error
 * (missing, unreadable or malformed input). Never throws; errors print to
 * stderr.
 */
int run_cli(int argc, const char* const* argv);

/// In-process form; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args);

} // namespace nilmeval
