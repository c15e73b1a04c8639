#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "edgetrack/error.hpp"

namespace edgetrack {

// Exit statuses; stable across releases.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitIo = 2,
  kExitConfig = 3,
  kExitRuntime = 4,
};

int exit_code_for(ErrorCode code);

struct CliInvocation {
  enum class Command { Run, Bench, Gen };
  Command command = Command::Run;
  std::filesystem::path config_path;
  // Flag overrides as config keys, applied in order after the config file.
  std::vector<std::pair<std::string, std::string>> overrides;
  bool dump_config = false;

  // bench and gen
  std::vector<int> objects;
  std::optional<std::int64_t> frames;
  std::int64_t warmup = 50;
  std::filesystem::path sequence_dir;
  std::filesystem::path power_sensor;
  std::filesystem::path csv_path;
  std::filesystem::path raw_dump;
  std::filesystem::path out_dir;  // gen output
};

// Returns nullopt when help was requested (already printed to `out`).
// Throws Error(UnknownFlag | MissingSubcommand | ConflictingFlags) or
// Error(InvalidConfig) for malformed flag values.
std::optional<CliInvocation> parse_args(int argc, const char* const* argv, std::ostream& out);

// Executes a parsed invocation and returns the exit status; results go to
// `out`, a structured error line to `err`.
int execute(const CliInvocation& invocation, std::ostream& out, std::ostream& err);

// parse_args + execute with usage and error reporting.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace edgetrack
