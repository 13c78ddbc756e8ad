#include "textfx/core/error.hpp"

namespace textfx {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::SampleRateConflict: return "SampleRateConflict";
    case ErrorCode::InvalidAudio: return "InvalidAudio";
    case ErrorCode::SilentSignal: return "SilentSignal";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::NoJsonFound: return "NoJsonFound";
    case ErrorCode::MissingKeys: return "MissingKeys";
    case ErrorCode::WrongEffect: return "WrongEffect";
    case ErrorCode::AmbiguousSchema: return "AmbiguousSchema";
    case ErrorCode::BackendUnreachable: return "BackendUnreachable";
    case ErrorCode::AuthMissing: return "AuthMissing";
    case ErrorCode::ParseFailure: return "ParseFailure";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegenerateKernel: return "DegenerateKernel";
    case ErrorCode::TooFewSets: return "TooFewSets";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::OverlappingRules: return "OverlappingRules";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::MissingFixture: return "MissingFixture";
    case ErrorCode::MissingCorpus: return "MissingCorpus";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace textfx
