#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace edgetrack {

enum class ErrorCode {
  OutOfFrame,
  NoFramesFound,
  MalformedImage,
  UnsupportedChroma,
  TruncatedStream,
  IoFailure,
  DimsMismatch,
  InvalidConfig,
  BoxTooSmall,
  ModelLoadFailure,
  DegenerateSearchRegion,
  SourceFailure,
  SinkFailure,
  UnknownFlag,
  MissingSubcommand,
  ConflictingFlags,
  MeasurementFailure,
};

std::string_view to_string(ErrorCode code);

// Every module reports failures through this type; callers that need to map
// failures (the CLI exit codes, per-track termination) switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace edgetrack
