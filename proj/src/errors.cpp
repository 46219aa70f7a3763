#include "levsim/errors.hpp"

namespace levsim {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingKey: return "MissingKey";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DegenerateTrap: return "DegenerateTrap";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::UnknownFigure: return "UnknownFigure";
    case ErrorCode::UnknownSubcommand: return "UnknownSubcommand";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_config_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingKey:
    case ErrorCode::OutOfRange:
    case ErrorCode::ParseError:
    case ErrorCode::DegenerateTrap:
    case ErrorCode::EmptyGrid:
    case ErrorCode::UnknownFigure:
    case ErrorCode::UnknownSubcommand:
    case ErrorCode::InvalidArgument:
    case ErrorCode::ConfigError:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, std::string message)
    : std::runtime_error(std::move(message)), code_(code) {}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace levsim
