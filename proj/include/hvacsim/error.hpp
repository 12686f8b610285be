#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hvacsim {

enum class ErrorKind {
  InvalidArgument,
  MalformedRow,
  GridMismatch,
  EmptyInput,
  OutOfRangeTemp,
  InfeasibleTarget,
  TooShort,
  LookaheadTooLong,
  QuotaInfeasible,
  DegenerateClass,
  MissingPrediction,
  UnstableStep,
  ZeroBaseline,
  InsufficientGrid,
  IoError,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (and the CLI
// exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hvacsim
