#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace textfx {

/// Stable error identifiers. The string form (see to_string) is what the CLI
/// prints in its stderr JSON and what the HTTP service returns in bodies.
enum class ErrorCode {
  InvalidParams,
  SampleRateConflict,
  InvalidAudio,
  SilentSignal,
  TooShort,
  SchemaMismatch,
  NoJsonFound,
  MissingKeys,
  WrongEffect,
  AmbiguousSchema,
  BackendUnreachable,
  AuthMissing,
  ParseFailure,
  DimensionMismatch,
  DegenerateKernel,
  TooFewSets,
  FileNotFound,
  SchemaError,
  OverlappingRules,
  InsufficientData,
  MissingFixture,
  MissingCorpus,
  InvalidArgument,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view code_name() const noexcept { return to_string(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace textfx
