#include "relay/error.hpp"

namespace relay {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotADistribution: return "NotADistribution";
    case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::InvalidDelta: return "InvalidDelta";
    case ErrorCode::PartitionOverlap: return "PartitionOverlap";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptyFeatureSpace: return "EmptyFeatureSpace";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::FeatureOutOfRange: return "FeatureOutOfRange";
    case ErrorCode::EmptyValidation: return "EmptyValidation";
    case ErrorCode::EmptyTest: return "EmptyTest";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyOracleSet: return "EmptyOracleSet";
    case ErrorCode::MissingTrueAlignment: return "MissingTrueAlignment";
    case ErrorCode::InvalidTemperature: return "InvalidTemperature";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InconsistentK: return "InconsistentK";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

int error_exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidConfig:
      return 1;
    case ErrorCode::ParseError:
    case ErrorCode::InconsistentK:
    case ErrorCode::ValidationError:
    case ErrorCode::IoError:
    case ErrorCode::NotADistribution:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::LabelOutOfRange:
      return 2;
    default:
      return 3;
  }
}

}  // namespace relay
