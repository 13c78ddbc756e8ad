// Acceptance suite: one PASS/FAIL line per primary criterion, each checked at
// its tolerance and wall-clock limit. Exits nonzero when any criterion fails.

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "support/corpora.hpp"
#include "support/oracles.hpp"
#include "support/parser_corpus.hpp"
#include "textfx/core/error.hpp"
#include "textfx/core/random.hpp"
#include "textfx/fx/params.hpp"
#include "textfx/dataset/corpus.hpp"
#include "textfx/dataset/merge.hpp"
#include "textfx/evalkit/bounds.hpp"
#include "textfx/evalkit/mmd.hpp"
#include "textfx/evalkit/runner.hpp"
#include "textfx/features/features.hpp"
#include "textfx/fx/eq.hpp"
#include "textfx/fx/reverb.hpp"
#include "textfx/textgen/backend.hpp"
#include "textfx/textgen/fewshot.hpp"
#include "textfx/textgen/parser.hpp"
#include "textfx/textgen/prompt.hpp"

using namespace textfx;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kSr = 44100;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("violated: " + what);
    }
  }
  void info(const std::string& line) { notes.push_back(line); }
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorCode::FileNotFound, "cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool params_close(const fx::ParamSet& a, const fx::ParamSet& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) {
        const auto u = x.to_array(), v = std::get<std::decay_t<decltype(x)>>(b).to_array();
        for (std::size_t i = 0; i < u.size(); ++i)
          if (std::fabs(u[i] - v[i]) > 1e-9) return false;
        return true;
      },
      a);
}

const evalkit::CellBounds& find_cell(const evalkit::BoundsResult& r, const std::string& word, const std::string& inst) {
  for (const auto& c : r.cells)
    if (c.word == word && c.instrument == inst) return c;
  fail(ErrorCode::MissingCorpus, "no bounds cell for " + word + "/" + inst);
}


Outcome dsp_identity() {
  Outcome o;
  const auto x = oracle::white_noise(kSr, 2.0, 1, 0.5, 2);
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    auto p = fx::sample_uniform(fx::FxType::Eq, rng);
    auto a = std::get<fx::EqParams>(p).to_array();
    for (std::size_t i = 0; i < a.size(); i += 3) a[i] = 0.0;
    const auto y = fx::apply_eq(x, fx::EqParams::from_array(a));
    for (std::size_t c = 0; c < 2; ++c)
      o.require(oracle::max_abs_diff(x.channel(c), y.channel(c)) <= 1e-6, "6-band 0 dB identity within 1e-6");
  }
  const auto g = fx::apply_graphic_eq(x, {});
  for (std::size_t c = 0; c < 2; ++c)
    o.require(oracle::max_abs_diff(x.channel(c), g.channel(c)) <= 1e-6, "40-band 0 dB identity within 1e-6");
  fx::ReverbParams r;
  r.band_gain.fill(0.7);
  r.band_decay.fill(2.0);
  r.mix = 0.0;
  const auto w = fx::apply_reverb(x, r, 3).audio;
  for (std::size_t c = 0; c < 2; ++c)
    o.require(oracle::max_abs_diff(x.channel(c), w.channel(c)) <= 1e-6, "mix=0 reverb identity within 1e-6");
  return o;
}

Outcome gain_oracle() {
  Outcome o;
  const auto x = oracle::sine(kSr, 1000.0, 0.5, 2.0);
  for (double target : {6.0, -6.0}) {
    fx::EqParams p;
    p.peaks[0] = {target, 1000.0, 2.0};
    const double got = oracle::steady_gain_db(x.channel(0), fx::apply_eq(x, p).channel(0));
    o.info("peaking " + fmt(target, 1) + " dB measured " + fmt(got) + " dB");
    o.require(std::fabs(got - target) <= 0.5, "gain within +/-0.5 dB of " + fmt(target, 1));
  }
  return o;
}

Outcome rt60_round_trip() {
  Outcome o;
  for (double t : {0.5, 1.0, 2.0}) {
    fx::ReverbParams p;
    p.band_gain.fill(1.0);
    p.band_decay.fill(t);
    p.mix = 1.0;
    const double est = features::estimate_rt60(fx::render_reverb_ir(p, kSr, 7));
    o.info("decay " + fmt(t, 1) + " s estimated " + fmt(est) + " s");
    o.require(std::fabs(est - t) <= 0.2 * t, "RT60 within 20% of " + fmt(t, 1) + " s");
  }
  return o;
}

Outcome feature_oracle() {
  Outcome o;
  const auto c = features::extract_features(AudioBuffer::mono(kSr, std::vector<float>(8192, 0.5f)));
  o.require(std::fabs(c.rms_energy - 0.5) < 1e-9 && std::fabs(*c.crest_factor - 1.0) < 1e-9 && c.dynamic_spread < 1e-9,
            "constant 0.5 gives rms 0.5, crest 1, spread 0");
  const auto s = features::extract_features(oracle::sine(kSr, 1000.0, 0.5, 2.0));
  o.info("sine rms " + fmt(s.rms_energy, 6) + " crest " + fmt(*s.crest_factor, 6) + " centroid " +
         fmt(s.spectral_centroid, 3));
  o.require(std::fabs(s.rms_energy - 0.5 / std::sqrt(2.0)) <= 1e-3, "sine rms within 1e-3");
  o.require(std::fabs(*s.crest_factor - std::sqrt(2.0)) <= 0.01 * std::sqrt(2.0), "sine crest within 1%");
  o.require(std::fabs(s.spectral_centroid - 1000.0) <= 5.0, "sine centroid within 5 Hz");

  const std::string reference =
      "{\n    \"sample_rate\": 44100,\n    \"rms_energy\": 0.04,\n    \"crest_factor\": 11.86,\n"
      "    \"dynamic_spread\": 0.06,\n    \"spectral_centroid\": 1476.24,\n    \"spectral_flatness\": 0.01,\n"
      "    \"spectral_bandwidth\": 1796.65,\n    \"estimated_rt60\": 2.94\n}";
  auto f = features::parse_features(reference);
  o.require(features::serialize_features(f) == reference, "reference feature block round-trips byte-exact");
  f.spectral_centroid = 1476.239;
  o.require(features::serialize_features(f) == reference, "two-decimal rounding reproduces the block");
  return o;
}

Outcome mmd_correctness() {
  Outcome o;
  using evalkit::Embedding;
  auto as_emb = [](const std::vector<oracle::Vec>& v) { return std::vector<Embedding>(v.begin(), v.end()); };
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto x = oracle::gaussian_set(10, 8, 0.0, 2 * seed);
    const auto y = oracle::gaussian_set(10, 8, 0.3, 2 * seed + 1);
    const auto r = evalkit::mmd(as_emb(x), as_emb(y));
    worst = std::max(worst, std::fabs(r.mmd2 - std::max(0.0, oracle::mmd2(x, y, oracle::median_distance(x, y)))));
    const double sym = std::fabs(r.mmd2 - evalkit::mmd2(as_emb(y), as_emb(x)));
    o.require(sym <= 1e-12, "symmetry within 1e-12");
    o.require(evalkit::mmd2(as_emb(x), as_emb(x)) == 0.0, "MMD(X,X) = 0");
  }
  std::ostringstream w;
  w << std::scientific << std::setprecision(2) << worst;
  o.info("max |mmd2 - oracle| = " + w.str());
  o.require(worst <= 1e-12, "oracle agreement within 1e-12");
  double last = -1.0;
  std::string seq;
  for (double mu : {0.0, 1.0, 2.0, 4.0}) {
    const double s = evalkit::mmd(as_emb(oracle::gaussian_set(200, 1, 0.0, 100)),
                                  as_emb(oracle::gaussian_set(200, 1, mu, 101))).score;
    seq += fmt(s) + " ";
    o.require(s > last, "monotone in the shift");
    last = s;
  }
  o.info("scores for shifts 0,1,2,4: " + seq);
  return o;
}

Outcome bounds_protocol() {
  Outcome o;
  const auto fixtures = evalkit::synthesized_fixtures(1.0);
  for (auto fx : {fx::FxType::Eq, fx::FxType::Reverb}) {
    const std::vector<std::string> words =
        fx == fx::FxType::Eq ? std::vector<std::string>{"warm", "bright", "thin"} : std::vector<std::string>{"church", "echo"};
    const auto ref = oracle::tight_cluster_reference(fx, words, 10, 17);
    const auto r = evalkit::compute_bounds(ref, fixtures, {.seeds = 5, .seed = 1});
    for (const auto& w : r.words) {
      o.info(std::string(fx::to_string(fx)) + "/" + w.word + ": UB " + fmt(w.bounds.upper_bound) + " LB " +
             fmt(w.bounds.lower_bound) + " delta " + fmt(w.bounds.delta));
      o.require(w.bounds.delta < 0.0 && w.bounds.seeds_used == 5, "delta < 0 with 5 seeds for " + w.word);
    }
  }
  return o;
}

struct MiniInputs {
  dataset::LoadResult raw;
  std::vector<dataset::MergeRule> rules;
  json expected;
  dataset::PipelineOptions opts;
};

MiniInputs mini_inputs() {
  const fs::path data(TEXTFX_REPO_DATA);
  MiniInputs in;
  in.expected = json::parse(slurp(data / "socialfx_mini_expected.json"));
  in.raw = dataset::load_socialfx(data / in.expected["csv"].get<std::string>());
  in.rules = dataset::load_merge_rules(data / in.expected["rules"].get<std::string>());
  in.opts.eq_tf_threshold = in.expected["eq_threshold"].get<std::size_t>();
  in.opts.reverb_tf_threshold = in.expected["reverb_threshold"].get<std::size_t>();
  in.opts.probe.seed = in.expected["probe_seed"].get<std::uint64_t>();
  return in;
}

Outcome dataset_pipeline() {
  Outcome o;
  const char* full = std::getenv("SOCIALFX_DIR");
  const auto fixtures = evalkit::synthesized_fixtures();
  if (full && *full) {
    const fs::path rules_path = std::getenv("SOCIALFX_RULES") ? fs::path(std::getenv("SOCIALFX_RULES"))
                                                              : fs::path(TEXTFX_REPO_DATA) / "merge_rules.txt";
    o.info("full corpus at " + std::string(full) + ", rules " + rules_path.string());
    const auto corpus = dataset::run_pipeline(dataset::load_socialfx_tree(full), dataset::load_merge_rules(rules_path),
                                              fixtures, {});
    const auto got = json::parse(dataset::pipeline_summary(corpus).dump());
    struct Want { const char* fx; std::size_t sets, words; double avg; };
    for (const auto& w : {Want{"eq", 273, 7, 39.0}, Want{"reverb", 3833, 19, 291.7}}) {
      const auto& g = got[w.fx];
      o.info(std::string(w.fx) + ": " + g["stages"]["probe"].dump() + " avg " + g["avg_effects_per_word"].dump());
      o.require(g["stages"]["probe"]["examples"] == w.sets, std::string(w.fx) + " set count " + std::to_string(w.sets));
      o.require(g["stages"]["probe"]["vocabulary"] == w.words, std::string(w.fx) + " word count " + std::to_string(w.words));
      o.require(std::fabs(g["avg_effects_per_word"].get<double>() - w.avg) < 0.05, std::string(w.fx) + " average " + fmt(w.avg, 1));
    }
    return o;
  }
  o.info("SOCIALFX_DIR unset; checking the 60-row mini corpus against its manifest");
  const auto in = mini_inputs();
  const auto corpus = dataset::run_pipeline(in.raw, in.rules, fixtures, in.opts);
  const auto got = json::parse(dataset::pipeline_summary(corpus).dump());
  o.require(in.raw.examples.size() == 60 && in.raw.skipped == 0, "60 rows load cleanly");
  for (const char* fx : {"eq", "reverb"}) {
    const auto& g = got[fx];
    const auto& w = in.expected[fx];
    o.info(std::string(fx) + " stages " + g["stages"].dump() + " counts " + g["counts"].dump());
    for (const char* stage : {"raw", "merged", "tf", "probe"})
      o.require(g["stages"][stage] == w["stages"][stage], std::string(fx) + " " + stage + " stage counts");
    o.require(g["counts"] == w["counts"], std::string(fx) + " per-word counts");
    o.require(g["avg_effects_per_word"] == w["avg_effects_per_word"], std::string(fx) + " average effects per word");
    o.require(g["dropped"] == w["dropped"], std::string(fx) + " dropped words");
  }
  return o;
}

// Collected after the timed self-consistency run; reported as INFO only.
std::vector<std::string> g_size_diagnostic;

Outcome self_consistency() {
  Outcome o;
  const auto in = mini_inputs();
  const auto fixtures = evalkit::synthesized_fixtures();
  const auto corpus = dataset::run_pipeline(in.raw, in.rules, fixtures, in.opts);
  evalkit::RenderCache cache;
  constexpr std::size_t kTrials = 50;

  for (auto fx : {fx::FxType::Eq, fx::FxType::Reverb}) {
    const std::string label(fx::to_string(fx));
    const auto& ref = corpus.references.at(fx);
    const auto bounds = evalkit::compute_bounds(ref, fixtures, {.seeds = 5}, &cache);

    std::vector<textgen::GenerationRequest> reqs;
    for (const auto& w : ref.words)
      for (const auto& f : fixtures) {
        textgen::GenerationRequest r;
        r.timbre_word = w.word;
        r.instrument = f.instrument;
        r.fx_type = fx;
        r.trials = kTrials;
        r.seed = derive_seed(derive_seed(0, w.word), f.instrument);
        reqs.push_back(r);
      }
    textgen::MockConfig replay_cfg{.mode = textgen::MockMode::Replay};
    for (const auto& w : ref.words) replay_cfg.replay[{fx, w.word}] = w.param_sets;
    textgen::MockBackend replay(replay_cfg);
    textgen::MockBackend uniform(textgen::MockConfig{.mode = textgen::MockMode::Uniform});
    const auto gt = evalkit::run_eval(reqs, replay, {}, fixtures, ref, {.method = "replay", .cache = &cache});
    const auto un = evalkit::run_eval(reqs, uniform, {}, fixtures, ref, {.method = "uniform", .cache = &cache});

    for (std::size_t i = 0; i < gt.rows.size(); ++i) {
      const auto& cell = find_cell(bounds, gt.rows[i].word, gt.rows[i].instrument);
      const std::string name = label + "/" + cell.word + "/" + cell.instrument;
      const double lb = cell.bounds.lower_bound;
      o.info(name + ": LB " + fmt(lb) + " replay " + fmt(gt.rows[i].mmd) + " uniform " + fmt(un.rows[i].mmd) +
             " (uniform - LB " + fmt(un.rows[i].mmd - lb) + ")");
      o.require(un.rows[i].word == cell.word && un.rows[i].instrument == cell.instrument, "uniform rows align with replay rows");
      o.require(gt.rows[i].trials_ok == kTrials && un.rows[i].trials_ok == kTrials, name + " all 50 trials succeed");
      o.require(gt.rows[i].mmd < lb, name + " replay below lower bound");
      o.require(std::fabs(un.rows[i].mmd - lb) <= 0.05, name + " uniform within 0.05 of lower bound");
    }

    // Same protocol with the random draw sized to the trial count.
    const auto matched = evalkit::compute_bounds(ref, fixtures, {.seeds = 5, .random_count = kTrials}, &cache);
    for (const auto& row : un.rows) {
      const double lb = find_cell(matched, row.word, row.instrument).bounds.lower_bound;
      g_size_diagnostic.push_back(label + "/" + row.word + "/" + row.instrument + ": LB(50 random) " + fmt(lb) +
                                  " uniform " + fmt(row.mmd) + " diff " + fmt(row.mmd - lb));
    }
  }
  return o;
}

Outcome prompt_fidelity() {
  Outcome o;
  const auto golden = slurp(fs::path(TEXTFX_TEST_DATA) / "golden_reverb_transcript.txt");
  textgen::GenerationRequest r;
  r.timbre_word = "church";
  r.instrument = "guitar";
  r.fx_type = fx::FxType::Reverb;
  r.context.include_code = true;
  r.context.include_features = true;
  r.context.features = features::parse_features(
      R"({"sample_rate": 44100, "rms_energy": 0.04, "crest_factor": 11.86, "dynamic_spread": 0.06,
          "spectral_centroid": 1476.24, "spectral_flatness": 0.01, "spectral_bandwidth": 1796.65,
          "estimated_rt60": 2.94})");
  r.context.fewshot = textgen::default_fewshot(fx::FxType::Reverb);
  const auto got = textgen::assemble_prompt(r).transcript();
  if (got != golden) {
    std::size_t i = 0;
    while (i < got.size() && i < golden.size() && got[i] == golden[i]) ++i;
    o.info("first difference at byte " + std::to_string(i));
  }
  o.info("transcript " + std::to_string(got.size()) + " bytes, golden " + std::to_string(golden.size()) + " bytes");
  o.require(got == golden, "byte-identical to the golden transcript");
  return o;
}

Outcome parser_robustness() {
  Outcome o;
  const auto corpus = oracle::parser_fuzz_corpus(7, 5);
  std::size_t ok = 0;
  for (const auto& c : corpus) {
    try {
      if (params_close(textgen::parse_params(c.text, fx::fx_type_of(c.expected)).params, c.expected)) ++ok;
    } catch (const Error&) {
    }
  }
  o.info(std::to_string(ok) + "/" + std::to_string(corpus.size()) + " wrapped objects recovered (" +
         std::to_string(oracle::wrap_templates().size()) + " templates)");
  o.require(ok == corpus.size(), "100% extraction on the prose-wrapping corpus");

  Rng rng(2718);
  std::size_t handled = 0, panics = 0;
  for (int i = 0; i < 100000; ++i) {
    std::string s(rng.below(256), '\0');
    const bool braces = i % 2 == 0;
    for (auto& ch : s) {
      ch = static_cast<char>(rng.below(256));
      if (braces && rng.below(8) == 0) ch = "{}\"':,"[rng.below(6)];
    }
    try {
      textgen::parse_params(s, i % 3 ? fx::FxType::Eq : fx::FxType::Reverb);
      ++handled;
    } catch (const Error&) {
      ++handled;
    } catch (...) {
      ++panics;
    }
  }
  o.info(std::to_string(handled) + " random inputs handled, " + std::to_string(panics) + " escaped exceptions");
  o.require(panics == 0, "no escaped exceptions on 1e5 random inputs");
  return o;
}

struct Criterion {
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"DSP identity suite", 5.0, dsp_identity},
      {"Gain oracle", 5.0, gain_oracle},
      {"RT60 round trip", 10.0, rt60_round_trip},
      {"Feature oracle", 5.0, feature_oracle},
      {"MMD correctness", 10.0, mmd_correctness},
      {"Bounds protocol", 60.0, bounds_protocol},
      {"Pipeline self-consistency", 600.0, self_consistency},
      {"Dataset pipeline", 600.0, dataset_pipeline},
      {"Prompt fidelity", 5.0, prompt_fidelity},
      {"Parser robustness", 60.0, parser_robustness},
  };

  std::size_t failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.notes.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.limit_seconds;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::cout << (pass ? "PASS " : "FAIL ") << c.name << "  [" << fmt(secs, 2) << " s, limit " << fmt(c.limit_seconds, 0)
              << " s]" << (in_time ? "" : "  TIME LIMIT EXCEEDED") << "\n";
    for (const auto& n : o.notes) std::cout << "     " << n << "\n";
    std::cout << std::flush;
  }
  if (!g_size_diagnostic.empty()) {
    std::cout << "INFO uniform mock vs a lower bound drawn with 50 random sets (diagnostic, not a criterion)\n";
    for (const auto& line : g_size_diagnostic) std::cout << "     " << line << "\n";
  }
  std::cout << (failed ? "ACCEPTANCE: " + std::to_string(failed) + " criterion(s) failed" : std::string("ACCEPTANCE: all criteria passed"))
            << "\n";
  return failed ? 1 : 0;
}
