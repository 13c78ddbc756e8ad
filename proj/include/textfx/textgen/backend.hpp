#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "textfx/fx/params.hpp"
#include "textfx/textgen/types.hpp"

namespace textfx::textgen {

/// One completion request. The structured fields let offline backends answer
/// without parsing the prompt text.
struct ChatRequest {
  std::string system;
  std::string user;
  double temperature = 0.7;
  std::uint64_t seed = 0;

  std::string timbre_word;
  std::string instrument;
  fx::FxType fx_type = fx::FxType::Eq;
  std::size_t trial = 0;
  std::vector<FewShotExample> fewshot;
};

/// A language model. Implementations must be callable from several threads.
/// Failures are reported as textfx::Error with BackendUnreachable or
/// AuthMissing.
class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  virtual std::string complete(const ChatRequest& req) = 0;
};

/// OpenAI-style chat completion client:
/// POST {endpoint_url}/chat/completions with model, messages, temperature.
class HttpChatBackend final : public LlmBackend {
 public:
  explicit HttpChatBackend(BackendConfig cfg);
  std::string complete(const ChatRequest& req) override;

  /// The JSON request body sent for `req` (exposed for wire-format tests).
  std::string request_body(const ChatRequest& req) const;

 private:
  BackendConfig cfg_;
  std::string scheme_host_port_;
  std::string path_;
};

enum class MockMode {
  RuleBased,  // word-keyed base answer with seeded jitter
  EchoFewShot,  // answer = few-shot example #echo_index (1-based)
  Replay,     // answer = replay[(fx, word)][trial % n]
  Uniform,    // every field uniform over its valid range
  Canned,     // fixed text
};

struct MockConfig {
  MockMode mode = MockMode::RuleBased;
  double jitter = 0.10;  // relative, uniform in [-jitter, +jitter] per field
  std::size_t echo_index = 1;
  std::map<std::pair<fx::FxType, std::string>, std::vector<fx::ParamSet>> replay;
  std::string canned_text;
  int sample_rate = fx::kNominalSampleRate;
};

/// Deterministic offline model. Responses depend only on the request's
/// structured fields and seed, so concurrent use needs no locking.
class MockBackend final : public LlmBackend {
 public:
  explicit MockBackend(MockConfig cfg = {});
  std::string complete(const ChatRequest& req) override;

  /// Base parameter set for a word before jitter.
  static fx::ParamSet rule_based_answer(const std::string& word, const std::string& instrument, fx::FxType fx);

 private:
  MockConfig cfg_;
};

/// Adapts a callable; handy for tests and scripted scenarios.
class FunctionBackend final : public LlmBackend {
 public:
  using Fn = std::function<std::string(const ChatRequest&)>;
  explicit FunctionBackend(Fn fn) : fn_(std::move(fn)) {}
  std::string complete(const ChatRequest& req) override { return fn_(req); }

 private:
  Fn fn_;
};

std::unique_ptr<LlmBackend> make_backend(const BackendConfig& cfg, MockConfig mock = {});

}  // namespace textfx::textgen
