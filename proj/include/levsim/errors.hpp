#pragma once

#include <stdexcept>
#include <string>

namespace levsim {

enum class ErrorCode {
  MissingKey,
  OutOfRange,
  ParseError,
  DegenerateTrap,
  EmptyGrid,
  StepTooLarge,
  NonFinite,
  InsufficientData,
  PoleHit,
  UnknownFigure,
  UnknownSubcommand,
  InvalidArgument,
  ConfigError,  // unreadable/unusable configuration input
  IoError,      // output-side failures
};

const char* error_code_name(ErrorCode code);

// True for usage/configuration problems (CLI exit 2); false for runtime
// failures (exit 1).
bool is_config_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace levsim
