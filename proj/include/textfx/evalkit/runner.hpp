#pragma once

#include <string>
#include <vector>

#include "textfx/evalkit/bounds.hpp"
#include "textfx/evalkit/render.hpp"
#include "textfx/textgen/backend.hpp"
#include "textfx/textgen/generate.hpp"

namespace textfx::evalkit {

struct EvalRow {
  std::string word;
  std::string instrument;
  fx::FxType fx = fx::FxType::Eq;
  std::string method;
  double mmd = 0.0;
  std::size_t trials_ok = 0;
  std::size_t trials_failed = 0;
  double clamp_rate = 0.0;  // share of successful trials with any clamped field
};

struct MacroRow {
  std::string instrument;  // "all" for the overall average
  double mmd = 0.0;
};

struct EvalReport {
  fx::FxType fx = fx::FxType::Eq;
  std::string method;
  std::vector<EvalRow> rows;
  std::vector<MacroRow> macro;  // per instrument in first-seen order, then "all"
};

struct EvalOptions {
  std::string method = "mock";
  std::uint64_t render_seed = 0;
  KernelConfig kernel;
  std::size_t parallelism = 1;
  std::size_t max_in_flight = 4;
  textgen::TranscriptLog* log = nullptr;
  RenderCache* cache = nullptr;
};

/// Generates, renders, embeds and scores every request against the
/// reference renders of its word on its instrument's fixture. Throws
/// MissingCorpus / MissingFixture for unknown words or instruments and
/// rethrows when every trial of a cell fails.
EvalReport run_eval(const std::vector<textgen::GenerationRequest>& requests, textgen::LlmBackend& llm,
                    const textgen::BackendConfig& backend, const std::vector<Fixture>& fixtures,
                    const Reference& reference, const EvalOptions& options = {});

}  // namespace textfx::evalkit
