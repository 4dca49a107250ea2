#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "qims/config.hpp"

namespace qims::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2, kNumericalError = 3 };

struct CommandOutput {
  nlohmann::json report;
  std::optional<std::string> csv;  // set when the artifact is a CSV matrix
  std::optional<std::string> svg;  // set when a plot was requested
  int code = kOk;
};

CommandOutput cmd_basis(const RunConfig& cfg);
CommandOutput cmd_hamiltonian(const RunConfig& cfg, bool csv);
CommandOutput cmd_check(const RunConfig& cfg, const std::string& which);
CommandOutput cmd_pfaffian(const RunConfig& cfg);
CommandOutput cmd_integral(const RunConfig& cfg);
CommandOutput cmd_series(const RunConfig& cfg);
CommandOutput cmd_verify(const RunConfig& cfg);

}  // namespace qims::cli
