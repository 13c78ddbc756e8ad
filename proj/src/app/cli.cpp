#include "textfx/app/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "textfx/app/config.hpp"
#include "textfx/app/server.hpp"
#include "textfx/core/random.hpp"
#include "textfx/core/wav.hpp"
#include "textfx/dataset/corpus.hpp"
#include "textfx/evalkit/report.hpp"
#include "textfx/evalkit/runner.hpp"
#include "textfx/features/features.hpp"
#include "textfx/fixtures/dry_fixtures.hpp"
#include "textfx/fx/reverb.hpp"
#include "textfx/textgen/fewshot.hpp"
#include "textfx/textgen/generate.hpp"
#include "textfx/textgen/serialize.hpp"

namespace textfx::app {
namespace fs = std::filesystem;
using nlohmann::json;

std::string error_json(std::string_view code, const std::string& message) {
  json doc = {{"error", {{"code", std::string(code)}, {"message", message}}}};
  return doc.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::string param_file_text(const fx::ParamSet& p) {
  return textgen::to_json(p).begin().value().dump(4) + "\n";
}

json read_manifest(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::MissingCorpus, "no corpus manifest at " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  json doc = json::parse(ss.str(), nullptr, false);
  if (doc.is_discarded()) fail(ErrorCode::SchemaError, "malformed corpus manifest " + path.string());
  return doc;
}

std::vector<evalkit::Fixture> fixtures_from_manifest(const json& manifest) {
  std::vector<evalkit::Fixture> out;
  if (!manifest.contains("fixtures") || !manifest["fixtures"].is_array())
    fail(ErrorCode::SchemaError, "corpus manifest lists no fixtures");
  for (const auto& entry : manifest["fixtures"]) {
    const auto name = entry.value("instrument", std::string());
    const auto inst = fixtures::parse_instrument(name);
    if (!inst) fail(ErrorCode::MissingFixture, "manifest names unknown fixture \"" + name + "\"");
    const int sr = entry.value("sample_rate", fx::kNominalSampleRate);
    const auto frames = entry.value("frames", std::size_t{0});
    if (sr < kMinSampleRate || frames == 0) fail(ErrorCode::SchemaError, "bad fixture entry for " + name);
    out.push_back({name, fixtures::synthesize_dry(*inst, sr, static_cast<double>(frames) / sr)});
  }
  if (out.empty()) fail(ErrorCode::MissingFixture, "corpus manifest lists no fixtures");
  return out;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorCode::IoError, "failed writing " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::FileNotFound, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Validator so that unknown effect labels are usage errors (exit 2).
const CLI::Validator kFxLabel(
    [](std::string& s) -> std::string {
      return fx::parse_fx_type(s) ? std::string() : "unknown fx type \"" + s + "\" (expected eq or reverb)";
    },
    "eq|reverb", "FxLabel");

const CLI::Validator kBackendLabel(
    [](std::string& s) -> std::string {
      return s == "mock" || s == "http_chat" ? std::string() : "unknown backend \"" + s + "\"";
    },
    "mock|http_chat", "BackendLabel");

struct Common {
  std::string config_path;
  std::string backend;
  std::string endpoint;
  std::string model;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> parallelism;
};

AppConfig resolve_config(const Common& c) {
  AppConfig cfg = load_config(c.config_path.empty() ? std::nullopt : std::optional<fs::path>(c.config_path));
  if (!c.backend.empty()) cfg.backend.kind = parse_backend_kind(c.backend);
  if (!c.endpoint.empty()) cfg.backend.endpoint_url = c.endpoint;
  if (!c.model.empty()) cfg.backend.model_name = c.model;
  if (c.seed) cfg.seed = *c.seed;
  if (c.parallelism) cfg.parallelism = *c.parallelism;
  cfg.check();
  return cfg;
}

void add_common(CLI::App* sub, Common& c, bool with_backend) {
  sub->add_option("--config", c.config_path, "JSON config file");
  sub->add_option("--seed", c.seed, "Master seed");
  sub->add_option("--parallelism", c.parallelism, "Worker count")->check(CLI::PositiveNumber);
  if (with_backend) {
    sub->add_option("--backend", c.backend, "mock or http_chat")->check(kBackendLabel);
    sub->add_option("--endpoint", c.endpoint, "Chat-completion base URL");
    sub->add_option("--model", c.model, "Model name for http_chat");
  }
}

textgen::MockMode parse_mock_mode(const std::string& s) {
  if (s == "rules") return textgen::MockMode::RuleBased;
  if (s == "uniform") return textgen::MockMode::Uniform;
  if (s == "echo") return textgen::MockMode::EchoFewShot;
  if (s == "groundtruth") return textgen::MockMode::Replay;
  fail(ErrorCode::InvalidArgument, "unknown mock mode \"" + s + "\"");
}

struct ContextFlags {
  bool fewshot = false;
  bool code = false;
  std::string features_wav;
};

textgen::ContextConfig make_context(const ContextFlags& f, fx::FxType fx) {
  textgen::ContextConfig ctx;
  ctx.include_code = f.code;
  if (f.fewshot) ctx.fewshot = textgen::default_fewshot(fx);
  if (!f.features_wav.empty()) {
    ctx.include_features = true;
    ctx.features = features::extract_features(wav::read(f.features_wav).audio);
  }
  return ctx;
}

// --- subcommands -----------------------------------------------------------

struct GenerateArgs {
  Common common;
  ContextFlags ctx;
  std::string word, instrument, fx_label, out_dir = ".", transcript, mock_mode = "rules";
  std::size_t trials = 1;
  std::size_t echo_index = 1;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
  const AppConfig cfg = resolve_config(a.common);
  const fx::FxType fx = *fx::parse_fx_type(a.fx_label);

  textgen::GenerationRequest req;
  req.timbre_word = a.word;
  req.instrument = a.instrument;
  req.fx_type = fx;
  req.trials = a.trials;
  req.seed = cfg.seed;
  req.context = make_context(a.ctx, fx);
  req.check();

  textgen::MockConfig mock;
  mock.mode = parse_mock_mode(a.mock_mode);
  mock.echo_index = a.echo_index;
  if (mock.mode == textgen::MockMode::Replay)
    fail(ErrorCode::InvalidArgument, "groundtruth replay is only available in eval");
  auto llm = textgen::make_backend(cfg.backend, mock);

  const fs::path out_dir(a.out_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());

  // A transcript inside the output directory is rewritten so reruns give
  // byte-identical files; an explicit path is appended to.
  fs::path log_path = a.transcript.empty() ? out_dir / "transcript.jsonl" : fs::path(a.transcript);
  if (a.transcript.empty()) fs::remove(log_path, ec);
  textgen::TranscriptLog log(log_path);

  textgen::GenerateOptions opts;
  opts.max_in_flight = cfg.parallelism;
  opts.log = &log;
  const auto outcomes = textgen::generate(req, *llm, cfg.backend, opts);

  std::size_t ok = 0;
  for (const auto& t : outcomes) {
    if (t.result) {
      char name[32];
      std::snprintf(name, sizeof name, "trial_%03zu.json", t.trial);
      write_text(out_dir / name, param_file_text(t.result->params));
      ++ok;
    } else {
      err << "trial " << t.trial << ": " << to_string(t.error->code) << ": " << t.error->message << "\n";
    }
  }
  out << ok << " of " << outcomes.size() << " trials succeeded; transcript " << log_path.string() << "\n";
  if (ok == 0) {
    const auto& e = *outcomes.front().error;
    err << error_json(to_string(e.code), "no trial succeeded: " + e.message) << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

struct RenderArgs {
  std::string in, params, out;
  std::uint64_t seed = 0;
};

int cmd_render(const RenderArgs& a, std::ostream& out, std::ostream&) {
  const auto input = wav::read(a.in);
  const auto params = textgen::detect_param_file(read_text(a.params));
  bool limited = false;
  AudioBuffer wet;
  if (const auto* rv = std::get_if<fx::ReverbParams>(&params)) {
    auto r = fx::apply_reverb(input.audio, *rv, a.seed);
    limited = r.peak_limited;
    wet = std::move(r.audio);
  } else {
    wet = evalkit::render(input.audio, params, a.seed);
  }
  wav::write(a.out, wet, input.format);
  out << "wrote " << a.out << (limited ? " (peak limited)" : "") << "\n";
  return kExitOk;
}

struct FeaturesArgs {
  std::string in, out;
};

int cmd_features(const FeaturesArgs& a, std::ostream& out, std::ostream&) {
  const auto text = features::serialize_features(features::extract_features(wav::read(a.in).audio));
  if (a.out.empty()) {
    out << text << "\n";
  } else {
    write_text(a.out, text + "\n");
  }
  return kExitOk;
}

struct FixturesArgs {
  std::string out_dir = "fixtures";
  double seconds = 0.0;
  int sample_rate = fx::kNominalSampleRate;
};

int cmd_fixtures(const FixturesArgs& a, std::ostream& out, std::ostream&) {
  for (const auto& f : evalkit::synthesized_fixtures(a.seconds, a.sample_rate)) {
    const fs::path path = fs::path(a.out_dir) / (f.instrument + ".wav");
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    wav::write(path, f.audio, wav::SampleFormat::Float32);
    out << path.string() << "\n";
  }
  return kExitOk;
}

struct DatasetArgs {
  Common common;
  std::string csv, rules, out_dir = "corpus";
  std::optional<std::size_t> eq_threshold, reverb_threshold;
  bool no_probe = false;
  std::uint64_t render_seed = 0;
  double fixture_seconds = 0.0;
};

int cmd_dataset_prep(const DatasetArgs& a, std::ostream& out, std::ostream& err) {
  const AppConfig cfg = resolve_config(a.common);
  const auto raw = dataset::load_socialfx_tree(a.csv);
  for (const auto& w : raw.warnings) err << "warning: " << w << "\n";
  const auto rules = a.rules.empty() ? std::vector<dataset::MergeRule>{} : dataset::load_merge_rules(a.rules);
  const auto fixtures = evalkit::synthesized_fixtures(a.fixture_seconds);

  dataset::PipelineOptions opts;
  opts.eq_tf_threshold = a.eq_threshold;
  opts.reverb_tf_threshold = a.reverb_threshold;
  opts.run_probe = !a.no_probe;
  opts.probe.seed = cfg.seed;
  opts.render_seed = a.render_seed;
  opts.parallelism = cfg.parallelism;
  const auto corpus = dataset::run_pipeline(raw, rules, fixtures, opts);
  evalkit::RenderCache cache;
  const auto manifest = dataset::write_corpus(a.out_dir, corpus, fixtures, opts, cache);
  out << manifest.dump(2) << "\n";
  return kExitOk;
}

struct BoundsArgs {
  Common common;
  std::string corpus = "corpus", fx_label, out_dir;
  std::size_t seeds = evalkit::kDefaultBoundSeeds;
  std::optional<std::size_t> random_count;
};

int cmd_bounds(const BoundsArgs& a, std::ostream& out, std::ostream&) {
  const AppConfig cfg = resolve_config(a.common);
  const fx::FxType fx = *fx::parse_fx_type(a.fx_label);
  const auto fixtures = fixtures_from_manifest(read_manifest(a.corpus));
  evalkit::RenderCache cache;
  const auto loaded = dataset::load_corpus(a.corpus, fixtures, &cache);
  const auto it = loaded.references.find(fx);
  if (it == loaded.references.end())
    fail(ErrorCode::MissingCorpus, "corpus has no " + std::string(fx::to_string(fx)) + " ground truth");

  evalkit::BoundsConfig bc;
  bc.seeds = a.seeds;
  bc.seed = cfg.seed;
  bc.render_seed = loaded.render_seed;
  bc.parallelism = cfg.parallelism;
  bc.random_count = a.random_count;
  const auto result = evalkit::compute_bounds(it->second, fixtures, bc, &cache);
  const std::string csv = evalkit::bounds_report_csv(result);
  if (a.out_dir.empty()) {
    out << csv;
  } else {
    const std::string stem = "bounds_" + std::string(fx::to_string(fx));
    write_text(fs::path(a.out_dir) / (stem + ".csv"), csv);
    write_text(fs::path(a.out_dir) / (stem + ".json"), evalkit::bounds_report_json(result) + "\n");
    out << "wrote " << (fs::path(a.out_dir) / (stem + ".csv")).string() << "\n";
  }
  return kExitOk;
}

struct EvalArgs {
  Common common;
  ContextFlags ctx;
  bool features_context = false;
  std::string corpus = "corpus", fx_label, out_dir = ".", replay = "rules", method;
  std::size_t trials = 50;
  std::vector<std::string> words, instruments;
};

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream&) {
  const AppConfig cfg = resolve_config(a.common);
  const fx::FxType fx = *fx::parse_fx_type(a.fx_label);
  const auto fixtures = fixtures_from_manifest(read_manifest(a.corpus));
  evalkit::RenderCache cache;
  const auto loaded = dataset::load_corpus(a.corpus, fixtures, &cache);
  const auto it = loaded.references.find(fx);
  if (it == loaded.references.end())
    fail(ErrorCode::MissingCorpus, "corpus has no " + std::string(fx::to_string(fx)) + " ground truth");
  const evalkit::Reference& ref = it->second;

  textgen::MockConfig mock;
  mock.mode = parse_mock_mode(a.replay);
  mock.sample_rate = fixtures.front().audio.sample_rate();
  for (const auto& w : ref.words) mock.replay[{fx, w.word}] = w.param_sets;
  auto llm = textgen::make_backend(cfg.backend, mock);

  std::vector<std::string> words = a.words;
  if (words.empty())
    for (const auto& w : ref.words) words.push_back(w.word);

  std::vector<textgen::GenerationRequest> requests;
  for (const auto& word : words) {
    for (const auto& fixture : fixtures) {
      if (!a.instruments.empty() &&
          std::find(a.instruments.begin(), a.instruments.end(), fixture.instrument) == a.instruments.end())
        continue;
      textgen::GenerationRequest req;
      req.timbre_word = word;
      req.instrument = fixture.instrument;
      req.fx_type = fx;
      req.trials = a.trials;
      req.seed = derive_seed(derive_seed(cfg.seed, word), fixture.instrument);
      req.context.include_code = a.ctx.code;
      if (a.ctx.fewshot) req.context.fewshot = textgen::default_fewshot(fx);
      if (a.features_context) {
        req.context.include_features = true;
        req.context.features = features::extract_features(fixture.audio);
      }
      requests.push_back(std::move(req));
    }
  }

  const fs::path out_dir(a.out_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  const std::string label(fx::to_string(fx));
  const fs::path log_path = out_dir / ("transcript_" + label + ".jsonl");
  fs::remove(log_path, ec);
  textgen::TranscriptLog log(log_path);

  evalkit::EvalOptions opts;
  opts.method = a.method.empty() ? (cfg.backend.kind == textgen::BackendKind::Mock ? "mock-" + a.replay
                                                                                     : cfg.backend.model_name)
                                  : a.method;
  opts.render_seed = loaded.render_seed;
  opts.parallelism = cfg.parallelism;
  opts.max_in_flight = cfg.parallelism;
  opts.log = &log;
  opts.cache = &cache;
  const auto report = evalkit::run_eval(requests, *llm, cfg.backend, fixtures, ref, opts);

  write_text(out_dir / ("eval_" + label + ".csv"), evalkit::eval_report_csv(report));
  write_text(out_dir / ("eval_" + label + ".json"), evalkit::eval_report_json(report) + "\n");
  out << evalkit::eval_report_csv(report);
  return kExitOk;
}

struct ServeArgs {
  Common common;
  std::string listen, data_dir, transcript;
};

int cmd_serve(const ServeArgs& a, std::ostream& out, std::ostream&) {
  AppConfig cfg = resolve_config(a.common);
  if (!a.listen.empty()) cfg.listen_addr = a.listen;
  if (!a.data_dir.empty()) cfg.data_dir = a.data_dir;
  if (!a.transcript.empty()) cfg.transcript_log = a.transcript;
  cfg.check();
  const auto addr = parse_listen_addr(cfg.listen_addr);
  Server server(cfg);
  const int port = server.bind(addr.host, addr.port);
  out << "listening on http://" << addr.host << ":" << port << "\n" << std::flush;
  server.listen();
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Text-to-audio-effect parameter generation, rendering and evaluation", "textfx"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Predict effect parameters for a timbre description");
  add_common(g, gen.common, true);
  g->add_option("--word", gen.word, "Timbre word")->required();
  g->add_option("--instrument", gen.instrument, "Instrument label")->required();
  g->add_option("--fx", gen.fx_label, "Effect: eq or reverb")->required()->check(kFxLabel);
  g->add_flag("--fewshot", gen.ctx.fewshot, "Include the shipped in-context examples");
  g->add_flag("--code", gen.ctx.code, "Include the DSP reference implementation");
  g->add_option("--features", gen.ctx.features_wav, "WAV file whose features are added as context")
      ->check(CLI::ExistingFile);
  g->add_option("--trials", gen.trials, "Number of trials")->check(CLI::PositiveNumber);
  g->add_option("--out", gen.out_dir, "Output directory for trial_NNN.json");
  g->add_option("--transcript", gen.transcript, "Append the JSONL transcript here instead");
  g->add_option("--mock-mode", gen.mock_mode, "Mock backend: rules, uniform or echo")
      ->check(CLI::IsMember({"rules", "uniform", "echo"}));
  g->add_option("--echo-index", gen.echo_index, "Few-shot example echoed by --mock-mode echo (1-based)");

  RenderArgs ren;
  auto* r = app.add_subcommand("render", "Apply a parameter file to a WAV file");
  r->add_option("--in", ren.in, "Dry WAV")->required()->check(CLI::ExistingFile);
  r->add_option("--params", ren.params, "Parameter JSON (schema detected by keys)")->required();
  r->add_option("--out", ren.out, "Wet WAV")->required();
  r->add_option("--seed", ren.seed, "Reverb noise seed");

  FeaturesArgs feat;
  auto* f = app.add_subcommand("features", "Print the DSP feature block of a WAV file");
  f->add_option("--in", feat.in, "WAV file")->required()->check(CLI::ExistingFile);
  f->add_option("--out", feat.out, "Write JSON here instead of stdout");

  FixturesArgs fix;
  auto* fx_cmd = app.add_subcommand("fixtures", "Write the synthesized dry clips");
  fx_cmd->add_option("--out", fix.out_dir, "Output directory");
  fx_cmd->add_option("--seconds", fix.seconds, "Clip length override (0 = nominal)");
  fx_cmd->add_option("--sample-rate", fix.sample_rate, "Sample rate")->check(CLI::Range(kMinSampleRate, 192000));

  DatasetArgs ds;
  auto* d = app.add_subcommand("dataset", "Corpus preparation");
  d->require_subcommand(1);
  auto* prep = d->add_subcommand("prep", "Merge, filter and render a SocialFX export into a corpus");
  add_common(prep, ds.common, false);
  prep->add_option("--csv", ds.csv, "SocialFX CSV file or directory")->required()->check(CLI::ExistingPath);
  prep->add_option("--rules", ds.rules, "Merge-rule file")->check(CLI::ExistingFile);
  prep->add_option("--out", ds.out_dir, "Corpus directory");
  prep->add_option("--eq-threshold", ds.eq_threshold, "Term-frequency threshold for EQ words");
  prep->add_option("--reverb-threshold", ds.reverb_threshold, "Term-frequency threshold for reverb words");
  prep->add_flag("--no-probe", ds.no_probe, "Skip the linear-probe filter");
  prep->add_option("--render-seed", ds.render_seed, "Reverb seed for reference renders");
  prep->add_option("--fixture-seconds", ds.fixture_seconds, "Dry clip length override (0 = nominal)");

  BoundsArgs bd;
  auto* b = app.add_subcommand("bounds", "Upper and lower MMD bounds per word");
  add_common(b, bd.common, false);
  b->add_option("--corpus", bd.corpus, "Corpus directory");
  b->add_option("--fx", bd.fx_label, "Effect: eq or reverb")->required()->check(kFxLabel);
  b->add_option("--seeds", bd.seeds, "Random seeds")->check(CLI::PositiveNumber);
  b->add_option("--random-count", bd.random_count, "Random renders per lower-bound draw (default: word size)")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
  b->add_option("--out", bd.out_dir, "Write bounds_<fx>.csv/.json here instead of stdout");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Generate, render and score against the corpus");
  add_common(e, ev.common, true);
  e->add_option("--corpus", ev.corpus, "Corpus directory");
  e->add_option("--fx", ev.fx_label, "Effect: eq or reverb")->required()->check(kFxLabel);
  e->add_option("--replay", ev.replay, "Mock answers: groundtruth, uniform, rules or echo")
      ->check(CLI::IsMember({"groundtruth", "uniform", "rules", "echo"}));
  e->add_option("--trials", ev.trials, "Trials per cell")->check(CLI::PositiveNumber);
  e->add_option("--words", ev.words, "Restrict to these words")->delimiter(',');
  e->add_option("--instruments", ev.instruments, "Restrict to these instruments")->delimiter(',');
  e->add_flag("--fewshot", ev.ctx.fewshot, "Include the shipped in-context examples");
  e->add_flag("--code", ev.ctx.code, "Include the DSP reference implementation");
  e->add_flag("--features", ev.features_context, "Include the dry clip's features");
  e->add_option("--method", ev.method, "Method label in reports");
  e->add_option("--out", ev.out_dir, "Report directory");

  ServeArgs sv;
  auto* s = app.add_subcommand("serve", "Run the HTTP service");
  add_common(s, sv.common, true);
  s->add_option("--listen", sv.listen, "host:port (port 0 picks a free port)");
  s->add_option("--data-dir", sv.data_dir, "Data directory");
  s->add_option("--transcript", sv.transcript, "JSONL transcript log");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    if (ex.get_exit_code() == 0) return app.exit(ex, out, err);  // --help
    err << error_json("InvalidArgument", ex.what()) << "\n";
    return kExitUsage;
  }

  try {
    if (*g) return cmd_generate(gen, out, err);
    if (*r) return cmd_render(ren, out, err);
    if (*f) return cmd_features(feat, out, err);
    if (*fx_cmd) return cmd_fixtures(fix, out, err);
    if (*prep) return cmd_dataset_prep(ds, out, err);
    if (*b) return cmd_bounds(bd, out, err);
    if (*e) return cmd_eval(ev, out, err);
    if (*s) return cmd_serve(sv, out, err);
  } catch (const Error& ex) {
    err << error_json(ex.code_name(), ex.what()) << "\n";
    return ex.code() == ErrorCode::InvalidArgument ? kExitUsage : kExitFailure;
  } catch (const std::exception& ex) {
    err << error_json("Internal", ex.what()) << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace textfx::app
