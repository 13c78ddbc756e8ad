#include "textfx/textgen/generate.hpp"

#include <json.hpp>

#include <chrono>
#include <fstream>

#include "textfx/core/error.hpp"
#include "textfx/core/parallel.hpp"
#include "textfx/core/random.hpp"
#include "textfx/core/sha256.hpp"
#include "textfx/textgen/parser.hpp"
#include "textfx/textgen/serialize.hpp"

namespace textfx::textgen {

TranscriptLog::TranscriptLog(std::filesystem::path path) : path_(std::move(path)) {}

void TranscriptLog::append(const std::vector<std::string>& lines) {
  std::lock_guard lock(mutex_);
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot open transcript log " + path_.string());
  for (const auto& line : lines) out << line << '\n';
  if (!out) fail(ErrorCode::IoError, "failed writing transcript log " + path_.string());
}

std::string transcript_record(const GenerationRequest& req, const PromptBundle& prompt, const TrialOutcome& t) {
  ordered_json rec = ordered_json::object();
  rec["trial"] = t.trial;
  rec["seed"] = t.seed;
  rec["timbre_word"] = req.timbre_word;
  rec["instrument"] = req.instrument;
  rec["fx_type"] = std::string(fx::to_string(req.fx_type));
  rec["attempts"] = t.attempts;
  rec["system"] = prompt.system;
  rec["user"] = prompt.user;
  if (t.result) {
    rec["raw_text"] = t.result->raw_text;
    rec["params"] = to_json(t.result->params);
    rec["clamped_fields"] = t.result->clamped_fields;
    rec["warnings"] = t.result->warnings;
  } else if (t.error) {
    rec["raw_text"] = t.error->raw_text;
    rec["error"] = {{"code", std::string(to_string(t.error->code))}, {"message", t.error->message}};
  }
  return rec.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::vector<TrialOutcome> generate(const GenerationRequest& req, LlmBackend& llm, const BackendConfig& backend,
                                   const GenerateOptions& options) {
  backend.check();
  const PromptBundle prompt = assemble_prompt(req, options.sample_rate);
  const std::string transcript = prompt.transcript();

  std::vector<TrialOutcome> outcomes(req.trials);
  parallel_for(req.trials, std::max<std::size_t>(1, options.max_in_flight), [&](std::size_t i) {
    TrialOutcome& out = outcomes[i];
    out.trial = i;
    out.seed = derive_seed(req.seed, static_cast<std::uint64_t>(i));

    ChatRequest chat{prompt.system, prompt.user, backend.temperature, out.seed,
                     req.timbre_word, req.instrument, req.fx_type, i, req.context.fewshot};
    for (std::size_t attempt = 0; attempt <= backend.max_retries; ++attempt) {
      ++out.attempts;
      // Retries draw fresh samples; the first attempt keeps the trial seed.
      chat.seed = attempt == 0 ? out.seed : derive_seed(out.seed, "retry" + std::to_string(attempt));
      std::string raw;
      const auto start = std::chrono::steady_clock::now();
      try {
        raw = llm.complete(chat);
        auto parsed = parse_params(raw, req.fx_type);
        GenerationResult r;
        r.params = std::move(parsed.params);
        r.raw_text = std::move(raw);
        r.prompt_transcript = transcript;
        r.clamped_fields = std::move(parsed.clamped_fields);
        r.warnings = std::move(parsed.warnings);
        r.latency_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.result = std::move(r);
        out.error.reset();
        break;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::AuthMissing) throw;
        out.error = TrialError{e.code(), e.what(), raw};
      } catch (const std::exception& e) {
        out.error = TrialError{ErrorCode::ParseFailure, e.what(), raw};
      }
    }
  });

  const bool all_unreachable = std::all_of(outcomes.begin(), outcomes.end(), [](const TrialOutcome& t) {
    return t.error && t.error->code == ErrorCode::BackendUnreachable;
  });
  if (all_unreachable) fail(ErrorCode::BackendUnreachable, outcomes.front().error->message);

  std::vector<std::string> lines;
  lines.reserve(outcomes.size());
  for (auto& t : outcomes) {
    lines.push_back(transcript_record(req, prompt, t));
    t.transcript_id = sha256_hex(lines.back()).substr(0, 16);
  }
  if (options.log) options.log->append(lines);
  return outcomes;
}

std::vector<GenerationResult> successful_results(const std::vector<TrialOutcome>& outcomes) {
  std::vector<GenerationResult> out;
  for (const auto& t : outcomes)
    if (t.result) out.push_back(*t.result);
  return out;
}

}  // namespace textfx::textgen
