#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "textfx/fx/params.hpp"
#include "textfx/textgen/types.hpp"

namespace textfx::textgen {

/// Role definition, task instruction and response-format block for one
/// effect. The format block lists every key of the effect's schema.
std::string build_system_prompt(fx::FxType fx, int sample_rate = fx::kNominalSampleRate);

/// Reference implementation source shipped as DSP-function context.
std::string_view code_asset(fx::FxType fx);

/// Context sections in fixed order: signal processing function, input audio
/// feature, in-context examples. Sections are separated by a blank line; an
/// all-off config yields "". Throws SchemaMismatch when a few-shot example
/// targets another effect. The open question cue is not included here.
std::string build_context(const ContextConfig& cfg, fx::FxType fx);

enum class QueryStyle {
  Plain,    // "Please design a eq audio effect for a warm piano sound."
  FewShot,  // "please design a reverb audio effects for a church guitar sound."
};

/// Throws InvalidArgument when word or instrument is empty.
std::string build_user_query(std::string_view timbre_word, std::string_view instrument, fx::FxType fx,
                             QueryStyle style = QueryStyle::Plain);

/// "QUESTION: <query>\nANSWER: <answer>" as used in in-context examples.
std::string format_fewshot_block(const FewShotExample& ex);

struct PromptBundle {
  std::string system;
  std::string user;

  /// system + blank line + user, the audit form of the prompt.
  std::string transcript() const { return system + "\n\n" + user; }
};

/// Full prompt for a request. With few-shot examples the user message ends
/// in an open "QUESTION: ...\nANSWER: " cue; otherwise the plain query
/// follows the context.
PromptBundle assemble_prompt(const GenerationRequest& req, int sample_rate = fx::kNominalSampleRate);

}  // namespace textfx::textgen
