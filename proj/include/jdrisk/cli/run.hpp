#pragma once

#include <string>
#include <vector>

#include "jdrisk/cli/config.hpp"
#include "jdrisk/cli/table.hpp"
#include "json.hpp"

namespace jdrisk::cli {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_numeric = 3, exit_crosscheck = 4 };

struct RunReport {
    std::vector<Row> rows;
    nlohmann::json manifest;  ///< everything except the timestamp
    bool crosscheck_passed = true;
};

/// Executes the configured task. Library InvalidArgument propagates as a
/// configuration problem, NumericError as a numeric failure.
RunReport execute(const RunConfig& config);

/// Writes results.<csv|tsv> and manifest.json to config.output.dir.
void write_outputs(const RunReport& report, const RunConfig& config, const std::string& timestamp);

/// Command-line entry point: parses flags, runs, writes, and maps failures to exit codes.
int run_cli(int argc, char** argv);

}  // namespace jdrisk::cli
