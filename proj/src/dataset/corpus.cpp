#include "textfx/dataset/corpus.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "textfx/core/error.hpp"
#include "textfx/core/parallel.hpp"
#include "textfx/core/sha256.hpp"
#include "textfx/dataset/filters.hpp"
#include "textfx/textgen/serialize.hpp"

namespace textfx::dataset {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kFormat = "textfx-corpus/1";

StageCounts stage(const std::vector<RawExample>& examples, fx::FxType fx) {
  StageCounts c;
  for (const auto& ex : examples) c.examples += ex.fx == fx;
  c.vocabulary = vocabulary(examples, fx).size();
  return c;
}

std::vector<std::string> difference(const std::vector<std::string>& before, const std::vector<std::string>& after) {
  std::vector<std::string> out;
  std::set_difference(before.begin(), before.end(), after.begin(), after.end(), std::back_inserter(out));
  return out;
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::IoError, "failed writing " + path.string());
}

std::string read_file(const fs::path& path, ErrorCode missing) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(missing, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ordered_json stage_json(const StageCounts& c) {
  return ordered_json{{"examples", c.examples}, {"vocabulary", c.vocabulary}};
}

std::string embeddings_stem(fx::FxType fx, const std::string& instrument) {
  return "embeddings_" + std::string(fx::to_string(fx)) + "_" + instrument;
}

features::DspFeatures from_vector(const std::array<double, features::DspFeatures::kDims>& v) {
  features::DspFeatures f;
  f.sample_rate = static_cast<int>(v[0]);
  f.rms_energy = v[1];
  if (v[1] > 0.0) f.crest_factor = v[2];
  f.dynamic_spread = v[3];
  f.spectral_centroid = v[4];
  f.spectral_flatness = v[5];
  f.spectral_bandwidth = v[6];
  f.estimated_rt60 = v[7];
  return f;
}

}  // namespace

std::string fixture_digest(const evalkit::Fixture& f) {
  std::string bytes = f.instrument + ":" + std::to_string(f.audio.sample_rate()) + ":" +
                      std::to_string(f.audio.channels()) + ":" + std::to_string(f.audio.frames()) + ":";
  for (std::size_t c = 0; c < f.audio.channels(); ++c) {
    const auto ch = f.audio.channel(c);
    bytes.append(reinterpret_cast<const char*>(ch.data()), ch.size() * sizeof(float));
  }
  return sha256_hex(bytes);
}

evalkit::Reference build_reference(const std::vector<RawExample>& filtered, fx::FxType fx, int sample_rate,
                                   std::vector<double>* fit_residuals) {
  evalkit::Reference ref;
  ref.fx = fx;
  std::vector<const RawExample*> rows;
  for (const auto& ex : filtered)
    if (ex.fx == fx) rows.push_back(&ex);

  // The EQ fit is the expensive part; do it once per row.
  std::vector<fx::ParamSet> converted(rows.size());
  std::vector<double> residuals(rows.size(), 0.0);
  parallel_for(rows.size(), 1, [&](std::size_t i) {
    const auto native = native_params(*rows[i]);
    if (fx == fx::FxType::Eq) {
      const auto fit = fit_parametric_from_graphic(std::get<fx::GraphicEqParams>(native), sample_rate);
      converted[i] = fit.params;
      residuals[i] = fit.residual_rms_db;
    } else {
      converted[i] = std::get<fx::ReverbParams>(native);
    }
  });
  if (fit_residuals) *fit_residuals = residuals;

  for (const auto& word : vocabulary(filtered, fx)) {
    evalkit::WordReference w;
    w.word = word;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& d = rows[i]->descriptors;
      if (std::find(d.begin(), d.end(), word) == d.end()) continue;
      w.render_sets.push_back(native_params(*rows[i]));
      w.param_sets.push_back(converted[i]);
    }
    ref.words.push_back(std::move(w));
  }
  return ref;
}

EvalCorpus run_pipeline(const LoadResult& raw, const std::vector<MergeRule>& rules,
                        const std::vector<evalkit::Fixture>& fixtures, const PipelineOptions& options) {
  if (fixtures.empty()) fail(ErrorCode::MissingFixture, "corpus preparation needs dry fixtures");
  const int sample_rate = fixtures.front().audio.sample_rate();

  EvalCorpus corpus;
  corpus.skipped_rows = raw.skipped;
  const auto merged = apply_merge_rules(raw.examples, rules);
  evalkit::RenderCache cache;

  for (const fx::FxType fx : {fx::FxType::Eq, fx::FxType::Reverb}) {
    FxPipelineLog log;
    log.fx = fx;
    log.raw = stage(raw.examples, fx);
    log.merged = stage(merged, fx);

    const auto threshold = fx == fx::FxType::Eq ? options.eq_tf_threshold : options.reverb_tf_threshold;
    log.tf_threshold = threshold.value_or(default_tf_threshold(fx));
    const auto after_tf = tf_filter(merged, fx, log.tf_threshold);
    log.tf = stage(after_tf, fx);
    log.dropped_by_tf = difference(vocabulary(merged, fx), vocabulary(after_tf, fx));

    std::vector<RawExample> after_probe = after_tf;
    if (options.run_probe && !after_tf.empty()) {
      auto outcome = probe_filter(after_tf, fx, fixtures, options.probe, options.render_seed, options.parallelism, &cache);
      after_probe = std::move(outcome.examples);
      log.probe_scores = std::move(outcome.scores);
    }
    log.probe = stage(after_probe, fx);
    log.dropped_by_probe = difference(vocabulary(after_tf, fx), vocabulary(after_probe, fx));
    log.vocabulary = vocabulary(after_probe, fx);
    for (const auto& [word, count] : term_frequencies(after_probe, fx)) log.counts[word] = count;
    if (!log.vocabulary.empty()) {
      const double total = std::accumulate(log.counts.begin(), log.counts.end(), 0.0,
                                           [](double acc, const auto& kv) { return acc + static_cast<double>(kv.second); });
      log.avg_effects_per_word = total / static_cast<double>(log.vocabulary.size());
    }

    std::vector<double> residuals;
    corpus.references[fx] = build_reference(after_probe, fx, sample_rate, &residuals);
    if (!residuals.empty()) {
      log.fit_residual_mean_db = std::accumulate(residuals.begin(), residuals.end(), 0.0) /
                                 static_cast<double>(residuals.size());
      log.fit_residual_max_db = *std::max_element(residuals.begin(), residuals.end());
    }
    corpus.examples[fx] = std::move(after_probe);
    corpus.logs[fx] = std::move(log);
  }
  return corpus;
}

ordered_json pipeline_summary(const EvalCorpus& corpus) {
  ordered_json doc = ordered_json::object();
  doc["format"] = kFormat;
  doc["skipped_rows"] = corpus.skipped_rows;
  for (const auto& [fx, log] : corpus.logs) {
    ordered_json j;
    j["tf_threshold"] = log.tf_threshold;
    j["stages"] = ordered_json{{"raw", stage_json(log.raw)},
                               {"merged", stage_json(log.merged)},
                               {"tf", stage_json(log.tf)},
                               {"probe", stage_json(log.probe)}};
    j["vocabulary"] = log.vocabulary;
    j["counts"] = ordered_json::object();
    for (const auto& [w, c] : log.counts) j["counts"][w] = c;
    j["parameter_sets"] = log.probe.examples;
    j["avg_effects_per_word"] = std::round(log.avg_effects_per_word * 10.0) / 10.0;
    j["dropped"] = ordered_json{{"tf", log.dropped_by_tf}, {"probe", log.dropped_by_probe}};
    ordered_json probe = ordered_json::object();
    probe["baseline_macro_f1"] = log.probe_scores.baseline_macro_f1;
    probe["f1"] = ordered_json::object();
    for (std::size_t i = 0; i < log.probe_scores.words.size() && i < log.probe_scores.f1.size(); ++i)
      probe["f1"][log.probe_scores.words[i]] = log.probe_scores.f1[i];
    j["probe"] = probe;
    if (fx == fx::FxType::Eq)
      j["fit_residual_rms_db"] = ordered_json{{"mean", log.fit_residual_mean_db}, {"max", log.fit_residual_max_db}};
    doc[std::string(fx::to_string(fx))] = j;
  }
  return doc;
}

ordered_json write_corpus(const fs::path& dir, const EvalCorpus& corpus, const std::vector<evalkit::Fixture>& fixtures,
                          const PipelineOptions& options, evalkit::RenderCache& cache) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());

  ordered_json manifest = pipeline_summary(corpus);
  manifest["render_seed"] = options.render_seed;
  manifest["probe_seed"] = options.probe.seed;
  manifest["fixtures"] = ordered_json::array();
  for (const auto& f : fixtures)
    manifest["fixtures"].push_back({{"instrument", f.instrument},
                                    {"sample_rate", f.audio.sample_rate()},
                                    {"frames", f.audio.frames()},
                                    {"sha256", fixture_digest(f)}});

  std::string corpus_hash_input;
  for (const auto& [fx, ref] : corpus.references) {
    const std::string label(fx::to_string(fx));
    ordered_json gt;
    gt["fx_type"] = label;
    gt["words"] = ordered_json::array();
    for (const auto& w : ref.words) {
      ordered_json word;
      word["word"] = w.word;
      word["sets"] = ordered_json::array();
      for (std::size_t i = 0; i < w.render_sets.size(); ++i) {
        ordered_json set;
        std::visit(
            [&](const auto& p) {
              using P = std::decay_t<decltype(p)>;
              if constexpr (std::is_same_v<P, fx::GraphicEqParams>) {
                set["native"] = p.gains_db;
              } else {
                set["native"] = p.to_array();
              }
            },
            w.render_sets[i]);
        set["params"] = textgen::to_json(w.param_sets[i]).front();
        word["sets"].push_back(set);
      }
      gt["words"].push_back(word);
    }
    const std::string gt_text = gt.dump(1);
    const std::string gt_name = "groundtruth_" + label + ".json";
    write_file(dir / gt_name, gt_text);
    auto& files = manifest[label]["files"];
    files[gt_name] = sha256_hex(gt_text);
    corpus_hash_input += files[gt_name].get<std::string>();

    // Raw (unstandardized) reference features per fixture.
    for (const auto& fixture : fixtures) {
      std::vector<std::pair<std::size_t, std::size_t>> index;
      for (std::size_t w = 0; w < ref.words.size(); ++w)
        for (std::size_t s = 0; s < ref.words[w].render_sets.size(); ++s) index.emplace_back(w, s);
      const auto feats = parallel_map<features::DspFeatures>(index.size(), options.parallelism, [&](std::size_t i) {
        return cache.features(fixture, ref.words[index[i].first].render_sets[index[i].second], options.render_seed);
      });
      std::string bin;
      bin.reserve(index.size() * features::DspFeatures::kDims * sizeof(double));
      for (const auto& f : feats) {
        const auto v = f.to_vector();
        bin.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(double));
      }
      const std::string stem = embeddings_stem(fx, fixture.instrument);
      write_file(dir / (stem + ".bin"), bin);
      ordered_json header;
      header["dtype"] = "float64-le";
      header["rows"] = index.size();
      header["cols"] = features::DspFeatures::kDims;
      header["columns"] = ordered_json::array();
      for (auto k : features::DspFeatures::keys()) header["columns"].push_back(std::string(k));
      header["instrument"] = fixture.instrument;
      header["fixture_sha256"] = fixture_digest(fixture);
      header["render_seed"] = options.render_seed;
      header["rows_index"] = ordered_json::array();
      for (const auto& [w, s] : index) header["rows_index"].push_back({ref.words[w].word, s});
      header["data_sha256"] = sha256_hex(bin);
      const std::string header_text = header.dump(1);
      write_file(dir / (stem + ".json"), header_text);
      files[stem + ".bin"] = header["data_sha256"];
      files[stem + ".json"] = sha256_hex(header_text);
      corpus_hash_input += header["data_sha256"].get<std::string>();
    }
  }
  manifest["corpus_sha256"] = sha256_hex(corpus_hash_input);
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

LoadedCorpus load_corpus(const fs::path& dir, const std::vector<evalkit::Fixture>& fixtures,
                         evalkit::RenderCache* cache) {
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) fail(ErrorCode::MissingCorpus, "no corpus manifest at " + manifest_path.string());
  LoadedCorpus out;
  out.manifest = json::parse(read_file(manifest_path, ErrorCode::MissingCorpus), nullptr, false);
  if (out.manifest.is_discarded() || out.manifest.value("format", "") != kFormat)
    fail(ErrorCode::SchemaError, "unrecognized corpus manifest " + manifest_path.string());
  out.render_seed = out.manifest.value("render_seed", std::uint64_t{0});

  for (const fx::FxType fx : {fx::FxType::Eq, fx::FxType::Reverb}) {
    const std::string label(fx::to_string(fx));
    const fs::path gt_path = dir / ("groundtruth_" + label + ".json");
    if (!fs::exists(gt_path)) continue;
    const json gt = json::parse(read_file(gt_path, ErrorCode::MissingCorpus), nullptr, false);
    if (gt.is_discarded()) fail(ErrorCode::SchemaError, "malformed " + gt_path.string());

    evalkit::Reference ref;
    ref.fx = fx;
    try {
      for (const auto& word : gt.at("words")) {
        evalkit::WordReference w;
        w.word = word.at("word").get<std::string>();
        for (const auto& set : word.at("sets")) {
          RawExample row;
          row.fx = fx;
          row.params_native = set.at("native").get<std::vector<double>>();
          w.render_sets.push_back(native_params(row));
          const std::string wrapped = json{{label, set.at("params")}}.dump();
          const auto parsed = textgen::detect_param_file(wrapped);
          if (fx == fx::FxType::Eq) {
            w.param_sets.emplace_back(std::get<fx::EqParams>(parsed));
          } else {
            w.param_sets.emplace_back(std::get<fx::ReverbParams>(parsed));
          }
        }
        ref.words.push_back(std::move(w));
      }
    } catch (const json::exception& e) {
      fail(ErrorCode::SchemaError, "malformed " + gt_path.string() + ": " + e.what());
    }

    if (cache) {
      for (const auto& fixture : fixtures) {
        const std::string stem = embeddings_stem(fx, fixture.instrument);
        if (!fs::exists(dir / (stem + ".json")) || !fs::exists(dir / (stem + ".bin"))) continue;
        const json header = json::parse(read_file(dir / (stem + ".json"), ErrorCode::MissingCorpus), nullptr, false);
        if (header.is_discarded() || header.value("fixture_sha256", "") != fixture_digest(fixture) ||
            header.value("render_seed", std::uint64_t{0}) != out.render_seed)
          continue;
        const std::string bin = read_file(dir / (stem + ".bin"), ErrorCode::MissingCorpus);
        if (sha256_hex(bin) != header.value("data_sha256", "")) continue;
        std::size_t row = 0;
        const std::size_t dims = features::DspFeatures::kDims;
        for (const auto& w : ref.words)
          for (const auto& set : w.render_sets) {
            if ((row + 1) * dims * sizeof(double) > bin.size()) break;
            std::array<double, features::DspFeatures::kDims> v{};
            std::memcpy(v.data(), bin.data() + row * dims * sizeof(double), dims * sizeof(double));
            cache->insert(fixture, set, out.render_seed, from_vector(v));
            ++row;
          }
      }
    }
    out.references[fx] = std::move(ref);
  }
  if (out.references.empty()) fail(ErrorCode::MissingCorpus, "corpus at " + dir.string() + " has no ground truth");
  return out;
}

}  // namespace textfx::dataset
