#pragma once

#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "textfx/textgen/backend.hpp"
#include "textfx/textgen/prompt.hpp"
#include "textfx/textgen/types.hpp"

namespace textfx::textgen {

/// Append-only JSONL audit log, one record per trial. Safe to share.
class TranscriptLog {
 public:
  explicit TranscriptLog(std::filesystem::path path);
  void append(const std::vector<std::string>& lines);
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::mutex mutex_;
};

struct GenerateOptions {
  std::size_t max_in_flight = 4;
  int sample_rate = fx::kNominalSampleRate;
  TranscriptLog* log = nullptr;
};

/// Audit record for one trial (no timing data, so reruns are byte-identical).
std::string transcript_record(const GenerationRequest& req, const PromptBundle& prompt, const TrialOutcome& t);

/// Runs req.trials completions. Trial i uses seed derive_seed(req.seed, i);
/// failed attempts are retried up to backend.max_retries times and then
/// recorded as a TrialError. Outcomes are ordered by trial index.
/// Throws AuthMissing at once, and BackendUnreachable when no trial could
/// reach the backend at all.
std::vector<TrialOutcome> generate(const GenerationRequest& req, LlmBackend& llm, const BackendConfig& backend,
                                   const GenerateOptions& options = {});

/// Successful results only, in trial order.
std::vector<GenerationResult> successful_results(const std::vector<TrialOutcome>& outcomes);

}  // namespace textfx::textgen
