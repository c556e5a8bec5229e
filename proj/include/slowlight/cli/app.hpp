// app.hpp - experiment dispatch and file output for the command-line tool

#pragma once

#include <filesystem>
#include <iosfwd>

#include "slowlight/cli/config.hpp"

namespace slowlight::cli {

enum ExitCode : int { Success = 0, Failure = 1, BadConfig = 2, NumericalFailure = 3, FeasibilityGate = 4 };

/// Reads and parses a config file. Throws ConfigError.
RunConfig load_config_file(const std::filesystem::path& path);

/// Runs the configured experiment and writes its files into `out`, replacing
/// any previous contents only once the run has succeeded. Throws on error.
void execute(const RunConfig& config, const std::filesystem::path& out, bool force, std::ostream& log);

/// execute() with errors reported on `log` and mapped to exit codes.
int run(const RunConfig& config, const std::filesystem::path& out, bool force, std::ostream& log);

}  // namespace slowlight::cli
