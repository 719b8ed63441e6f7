#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "spinflow/config.hpp"

namespace spinflow {

/// Process exit codes of the spinflow CLI.
enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitInvalidConfig = 2,
    kExitIo = 3,
    kExitFormat = 4,
    kExitSolveFailed = 5,
    kExitVerifyFailed = 6,
    kExitMismatch = 7,
};

struct CommandOutput {
    int exit_code = kExitOk;
    /// JSON report text (sorted keys, two-space indent, trailing newline);
    /// empty when the command failed before producing a report.
    std::string report;
    /// Path the report was written to.
    std::string report_path;
};

/// Each command writes its artifacts and `<command>_report.json` into
/// config.out_dir (created if missing). Library errors propagate.
CommandOutput run_solve(const RunConfig& config);
CommandOutput run_reconstruct(const RunConfig& config);
CommandOutput run_blowup(const RunConfig& config);
CommandOutput run_verify(const RunConfig& config);

/**
 * CLI entry: loads the config, applies the overrides and dispatches.
 * Exceptions are mapped to exit codes and described on `err`.
 */
int run_command(const std::string& command, const std::string& config_path,
                const std::optional<std::string>& out_dir, const std::optional<std::uint64_t>& seed,
                std::ostream& err);

}  // namespace spinflow
