#ifndef RELAY_ERROR_HPP
#define RELAY_ERROR_HPP

#include <stdexcept>
#include <string>

namespace relay {

// Coded exception; every reject in the library carries one of these codes so
// callers (and the CLI exit-code mapping) can dispatch without string matching.
enum class ErrorCode {
  // domain
  DimensionMismatch,
  NotADistribution,
  LabelOutOfRange,
  InvalidAlpha,
  InvalidDelta,
  PartitionOverlap,
  // predsets
  EmptyInput,
  EmptyFeatureSpace,
  // alignment
  EmptyTrainingSet,
  FeatureOutOfRange,
  // cascade
  EmptyValidation,
  EmptyTest,
  // metrics
  LengthMismatch,
  EmptyOracleSet,
  MissingTrueAlignment,
  // synth
  InvalidTemperature,
  InvalidConfig,
  // ingest
  ParseError,
  InconsistentK,
  ValidationError,
  IoError,
  // harness
  ConfigError,
  Internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const { return code_; }
  // Message without the code prefix, for rewrapping with added context.
  const std::string& message() const { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

// Exit-code buckets for the CLI: 1 = config, 2 = data, 3 = internal.
int error_exit_code(ErrorCode code);

}  // namespace relay

#endif  // RELAY_ERROR_HPP
