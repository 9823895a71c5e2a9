#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace votewire {

enum class ErrorCode {
  kZeroBallots,
  kZeroRegistry,
  kUnknownOption,
  kMalformedRecord,
  kMissingColumn,
  kNonNumericCell,
  kNoSessions,
  kDegenerate,
  kEmptyInput,
  kTooFewPoints,
  kUnknownCenter,
  kDegenerateX,
  kEmptySelection,
  kEmptySample,
  kQOutOfRange,
  kInsufficientData,
  kDegenerateBinning,
  kZeroExpected,
  kPOutOfRange,
  kDomainError,
  kInvalidConfig,
  kUnknownMetric,
  kIo,
};

const char* ErrorCodeName(ErrorCode code);

// Every failure the library reports carries one of the codes above so the
// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse failure with the 1-based line (or CSV row) it was found on.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t line, const std::string& reason)
      : Error(code, "line " + std::to_string(line) + ": " + reason), line_(line), reason_(reason) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

}  // namespace votewire
