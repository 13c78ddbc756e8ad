#include "textfx/textgen/types.hpp"

#include <cmath>

namespace textfx::textgen {

void ContextConfig::check() const {
  if (include_features && !features)
    fail(ErrorCode::InvalidArgument, "feature context requested but no features supplied");
  if (fewshot.size() > kMaxFewShot)
    fail(ErrorCode::InvalidArgument, "at most " + std::to_string(kMaxFewShot) + " few-shot examples");
}

void GenerationRequest::check() const {
  if (timbre_word.empty()) fail(ErrorCode::InvalidArgument, "timbre word must not be empty");
  if (instrument.empty()) fail(ErrorCode::InvalidArgument, "instrument must not be empty");
  if (trials < 1) fail(ErrorCode::InvalidArgument, "trials must be at least 1");
  context.check();
}

void BackendConfig::check() const {
  if (!(temperature >= 0.0)) fail(ErrorCode::InvalidArgument, "temperature must be >= 0");
  if (!(timeout_seconds > 0.0)) fail(ErrorCode::InvalidArgument, "timeout must be positive");
  if (kind == BackendKind::HttpChat && (endpoint_url.empty() || model_name.empty()))
    fail(ErrorCode::InvalidArgument, "http_chat backend needs endpoint_url and model_name");
}

}  // namespace textfx::textgen
