#pragma once

#include <string>

#include "json.hpp"

#include "henonlab/app/config.hpp"

namespace henonlab::app {

struct CommandOutcome {
    nlohmann::json result;
    /// 0 on success, 3 when the computation failed (the result still describes it).
    int exit_code = 0;
};

/// Runs a subcommand on a resolved configuration and writes its data files.
/// Throws ConfigError for invalid input.
CommandOutcome run_command(const std::string &command, const RunConfig &config);

/// Report envelope: tool, version, command, config, start time and wall-clock seconds.
nlohmann::json make_report(const std::string &command, const RunConfig &config, const nlohmann::json &result,
                           const std::string &started_at, double seconds);

/// Parses, resolves, runs and reports; returns the process exit code.
/// `config` holds the merged file and flag settings.
int execute(const std::string &command, const RunConfig &config);

const char *version();

} // namespace henonlab::app
