#include "textfx/evalkit/runner.hpp"

#include <algorithm>

#include "textfx/core/error.hpp"
#include "textfx/core/parallel.hpp"

namespace textfx::evalkit {
namespace {

const Fixture* find_fixture(const std::vector<Fixture>& fixtures, const std::string& instrument) {
  for (const auto& f : fixtures)
    if (f.instrument == instrument) return &f;
  return nullptr;
}

}  // namespace

EvalReport run_eval(const std::vector<textgen::GenerationRequest>& requests, textgen::LlmBackend& llm,
                    const textgen::BackendConfig& backend, const std::vector<Fixture>& fixtures,
                    const Reference& reference, const EvalOptions& options) {
  EvalReport report;
  report.fx = reference.fx;
  report.method = options.method;
  if (requests.empty()) return report;

  for (const auto& req : requests) {
    if (req.fx_type != reference.fx)
      fail(ErrorCode::SchemaMismatch, "request for " + std::string(fx::to_string(req.fx_type)) +
                                          " evaluated against a " + std::string(fx::to_string(reference.fx)) +
                                          " reference");
    if (!reference.find(req.timbre_word))
      fail(ErrorCode::MissingCorpus, "no reference sets for word \"" + req.timbre_word + "\"");
    if (!find_fixture(fixtures, req.instrument))
      fail(ErrorCode::MissingFixture, "no dry fixture for instrument \"" + req.instrument + "\"");
  }

  RenderCache local;
  RenderCache& cache = options.cache ? *options.cache : local;
  const auto refs = embed_reference(reference, fixtures, options.render_seed, cache, options.parallelism);

  for (const auto& req : requests) {
    const Fixture& fixture = *find_fixture(fixtures, req.instrument);
    textgen::GenerateOptions gen;
    gen.max_in_flight = options.max_in_flight;
    gen.sample_rate = fixture.audio.sample_rate();
    gen.log = options.log;
    const auto outcomes = textgen::generate(req, llm, backend, gen);

    EvalRow row;
    row.word = req.timbre_word;
    row.instrument = req.instrument;
    row.fx = req.fx_type;
    row.method = options.method;
    std::vector<const textgen::GenerationResult*> ok;
    for (const auto& t : outcomes) {
      if (t.result) {
        ok.push_back(&*t.result);
        if (!t.result->clamped_fields.empty()) row.clamp_rate += 1.0;
      } else {
        ++row.trials_failed;
      }
    }
    row.trials_ok = ok.size();
    if (ok.empty()) {
      const auto& err = *outcomes.front().error;
      fail(err.code, "every trial failed for " + req.timbre_word + "/" + req.instrument + ": " + err.message);
    }
    row.clamp_rate /= static_cast<double>(ok.size());

    const auto& stats = refs.stats.at(fixture.instrument);
    auto generated = parallel_map<Embedding>(ok.size(), options.parallelism, [&](std::size_t i) {
      return stats.apply(cache.features(fixture, to_any(ok[i]->params), options.render_seed));
    });
    // A single sample as a duplicated pair leaves the V-statistic unchanged.
    if (generated.size() == 1) generated.push_back(generated.front());
    row.mmd = mmd(generated, refs.cells.at({req.timbre_word, req.instrument}), options.kernel).score;
    report.rows.push_back(std::move(row));
  }

  std::vector<std::string> instruments;
  for (const auto& r : report.rows)
    if (std::find(instruments.begin(), instruments.end(), r.instrument) == instruments.end())
      instruments.push_back(r.instrument);
  double total = 0.0;
  for (const auto& inst : instruments) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : report.rows)
      if (r.instrument == inst) {
        sum += r.mmd;
        ++n;
      }
    report.macro.push_back({inst, sum / static_cast<double>(n)});
  }
  for (const auto& r : report.rows) total += r.mmd;
  report.macro.push_back({"all", total / static_cast<double>(report.rows.size())});
  return report;
}

}  // namespace textfx::evalkit
