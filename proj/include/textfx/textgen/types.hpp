#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "textfx/core/error.hpp"
#include "textfx/features/features.hpp"
#include "textfx/fx/params.hpp"

namespace textfx::textgen {

inline constexpr std::size_t kMaxFewShot = 16;

struct FewShotExample {
  std::string timbre_word;
  std::string instrument;
  fx::ParamSet params;

  fx::FxType fx_type() const noexcept { return fx::fx_type_of(params); }
};

struct ContextConfig {
  bool include_features = false;
  std::optional<features::DspFeatures> features;
  bool include_code = false;
  std::vector<FewShotExample> fewshot;

  /// Throws InvalidArgument when features are requested but absent or when
  /// more than kMaxFewShot examples are supplied.
  void check() const;
};

struct GenerationRequest {
  std::string timbre_word;
  std::string instrument;  // "drums", "guitar", "piano", or any other label
  fx::FxType fx_type = fx::FxType::Eq;
  ContextConfig context;
  std::size_t trials = 1;
  std::uint64_t seed = 0;

  void check() const;
};

enum class BackendKind { HttpChat, Mock };

struct BackendConfig {
  BackendKind kind = BackendKind::Mock;
  std::string endpoint_url;
  std::string model_name;
  std::string api_key_env = "LLM2FX_API_KEY";
  double temperature = 0.7;
  double timeout_seconds = 60.0;
  std::size_t max_retries = 2;

  void check() const;
};

struct GenerationResult {
  fx::ParamSet params;
  std::string raw_text;
  std::string prompt_transcript;
  std::vector<std::string> clamped_fields;
  std::vector<std::string> warnings;
  double latency_seconds = 0.0;
};

struct TrialError {
  ErrorCode code = ErrorCode::ParseFailure;
  std::string message;
  std::string raw_text;
};

struct TrialOutcome {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t attempts = 0;
  std::string transcript_id;  // digest of the audit record for this trial
  std::optional<GenerationResult> result;
  std::optional<TrialError> error;

  bool ok() const noexcept { return result.has_value(); }
};

}  // namespace textfx::textgen
