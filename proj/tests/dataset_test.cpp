#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "support/oracles.hpp"
#include "textfx/core/error.hpp"
#include "textfx/dataset/corpus.hpp"
#include "textfx/dataset/filters.hpp"
#include "textfx/dataset/fit.hpp"
#include "textfx/dataset/merge.hpp"
#include "textfx/dataset/probe.hpp"
#include "textfx/dataset/socialfx.hpp"
#include "textfx/fx/eq.hpp"

using namespace textfx;
using namespace textfx::dataset;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a textfx::Error");
  return ErrorCode::InvalidArgument;
}

RawExample eq_row(std::string id, std::vector<std::string> words, double gain = 0.0) {
  return {std::move(id), fx::FxType::Eq, std::move(words), std::vector<double>(40, gain)};
}

double rms_db_error(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s / static_cast<double>(a.size()));
}

nlohmann::json expected_manifest() {
  std::ifstream in(fs::path(TEXTFX_REPO_DATA) / "socialfx_mini_expected.json");
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_SUITE("csv") {
  TEST_CASE("rows, quoting and skips") {
    std::string gains;
    for (int i = 0; i < 40; ++i) gains += (i ? " " : "") + std::to_string(i % 3);
    std::string csv = "source_id,fx_type,descriptors,params\r\n";
    csv += "a,eq,\"Warm; toasty\"," + gains + "\r\n";
    csv +="b,chorus,warm,1 2 3\n";
    csv += "c,eq,,1\n";
    csv += "d,eq,warm,1 2 x\n";
    csv += "e,reverb,church,1 2 3\n";
    csv += "f,eq,warm\n";
    const auto r = parse_socialfx(csv);
    REQUIRE(r.examples.size() == 1);
    CHECK(r.examples[0].descriptors == std::vector<std::string>{"warm", "toasty"});
    CHECK(r.examples[0].params_native.size() == 40);
    CHECK(r.examples[0].params_native[4] == 1.0);
    CHECK(r.skipped == 5);
    CHECK(r.warnings.size() == 5);
  }

  TEST_CASE("write then parse is the identity") {
    std::vector<RawExample> rows{eq_row("x1", {"warm"}, 1.5), eq_row("x2", {"bright", "thin"}, -2.25)};
    rows.push_back({"r1", fx::FxType::Reverb, {"church"}, std::vector<double>(25, 0.5)});
    CHECK(parse_socialfx(write_socialfx(rows)).examples == rows);
  }

  TEST_CASE("empty file and bad header") {
    const auto r = parse_socialfx("");
    CHECK(r.examples.empty());
    CHECK(r.warnings.size() == 1);
    CHECK(code_of([] { parse_socialfx("id,kind\n"); }) == ErrorCode::SchemaError);
    CHECK(code_of([] { load_socialfx("/nonexistent/file.csv"); }) == ErrorCode::FileNotFound);
  }
}

TEST_SUITE("merge and filter") {
  TEST_CASE("representative replaces members") {
    const auto rules = parse_merge_rules("# comment\nwarm,heat,toasty -> warm\n\nchurch, cathedral -> church\n");
    REQUIRE(rules.size() == 2);
    CHECK(rules[1].members == std::vector<std::string>{"church", "cathedral"});
    const auto merged = apply_merge_rules({eq_row("a", {"toasty"}), eq_row("b", {"heat", "warm"}), eq_row("c", {"cold"})}, rules);
    CHECK(merged[0].descriptors == std::vector<std::string>{"warm"});
    CHECK(merged[1].descriptors == std::vector<std::string>{"warm"});
    CHECK(merged[2].descriptors == std::vector<std::string>{"cold"});
    CHECK(apply_merge_rules(merged, {}) == merged);
  }

  TEST_CASE("rule table errors") {
    CHECK(code_of([] { apply_merge_rules({}, parse_merge_rules("a,b -> a\nb,c -> c\n")); }) == ErrorCode::OverlappingRules);
    CHECK(code_of([] { parse_merge_rules("a,b\n"); }) == ErrorCode::SchemaError);
  }

  TEST_CASE("term-frequency threshold") {
    std::vector<RawExample> rows;
    for (int i = 0; i < 5; ++i) rows.push_back(eq_row("w" + std::to_string(i), {"warm"}));
    for (int i = 0; i < 2; ++i) rows.push_back(eq_row("b" + std::to_string(i), {"bright"}));
    rows.push_back(eq_row("mix", {"bright", "warm"}));
    const auto tf = term_frequencies(rows, fx::FxType::Eq);
    CHECK(tf.at("warm") == 6);
    CHECK(tf.at("bright") == 3);
    const auto kept = tf_filter(rows, fx::FxType::Eq, 4);
    CHECK(kept.size() == 6);
    for (const auto& r : kept) CHECK(r.descriptors == std::vector<std::string>{"warm"});
    CHECK(tf_filter(rows, fx::FxType::Eq, 0) == rows);
    CHECK(default_tf_threshold(fx::FxType::Eq) == 20);
    CHECK(default_tf_threshold(fx::FxType::Reverb) == 100);
  }
}

TEST_SUITE("probe") {
  // Three words in 8 dimensions. "alpha" and "beta" are separable clusters;
  // "noise" draws each point from one of those two clusters at random.
  void planted(std::vector<evalkit::Embedding>& x, std::vector<std::size_t>& y, bool with_noise) {
    Rng rng(21);
    auto point = [&](double c) {
      evalkit::Embedding e(8);
      for (auto& v : e) v = c + 0.3 * rng.normal();
      return e;
    };
    for (int i = 0; i < 30; ++i) {
      x.push_back(point(-2.0));
      y.push_back(0);
      x.push_back(point(2.0));
      y.push_back(1);
      if (with_noise) {
        x.push_back(point(rng.below(2) ? 2.0 : -2.0));
        y.push_back(2);
      }
    }
  }

  TEST_CASE("planted noise word is dropped") {
    std::vector<evalkit::Embedding> x;
    std::vector<std::size_t> y;
    planted(x, y, true);
    const auto s = probe_scores(x, y, {"alpha", "beta", "noise"}, {});
    CHECK(s.kept == std::vector<std::string>{"alpha", "beta"});
    CHECK(s.dropped == std::vector<std::string>{"noise"});
    CHECK(s.f1[2] <= s.baseline_macro_f1);
  }

  TEST_CASE("separable clusters keep every word") {
    std::vector<evalkit::Embedding> x;
    std::vector<std::size_t> y;
    planted(x, y, false);
    const auto s = probe_scores(x, y, {"alpha", "beta"}, {});
    CHECK(s.dropped.empty());
    CHECK(s.f1[0] > 0.95);
  }

  TEST_CASE("underfilled folds") {
    std::vector<evalkit::Embedding> x{{0.0}, {1.0}, {2.0}, {3.0}, {4.0}, {5.0}, {6.0}};
    std::vector<std::size_t> y{0, 0, 0, 0, 0, 1, 1};
    CHECK(code_of([&] { cross_validated_f1(x, y, 2, {}); }) == ErrorCode::InsufficientData);
  }
}

TEST_SUITE("fit") {
  TEST_CASE("flat curve fits to a flat parametric EQ") {
    const auto r = fit_parametric_from_graphic({});
    CHECK(r.residual_rms_db < 0.1);
    for (std::size_t i = 0; i < fx::EqParams::kFieldCount; i += 3) CHECK(std::fabs(r.params.to_array()[i]) < 0.1);
  }

  TEST_CASE("curves generated by a parametric EQ are recovered") {
    Rng rng(12);
    const auto freqs = fit_frequencies();
    for (int trial = 0; trial < 10; ++trial) {
      fx::EqParams truth;
      truth.low_shelf.gain_db = rng.uniform(-6.0, 6.0);
      for (auto& b : truth.peaks) b.gain_db = rng.uniform(-6.0, 6.0);
      truth.high_shelf.gain_db = rng.uniform(-6.0, 6.0);
      fx::GraphicEqParams g;
      const auto& centers = fx::GraphicEqParams::center_frequencies();
      const auto resp = fx::eq_response_db(truth, centers, 44100);
      std::copy(resp.begin(), resp.end(), g.gains_db.begin());
      const auto r = fit_parametric_from_graphic(g);
      CHECK(rms_db_error(fx::eq_response_db(r.params, freqs, 44100), fx::graphic_eq_response_db(g, freqs, 44100)) < 1.0);
      CHECK(r.iterations <= kFitIterations);
      CHECK_NOTHROW(fx::validate(r.params, 44100));
    }
  }

  TEST_CASE("single graphic band near 1 kHz") {
    const auto& centers = fx::GraphicEqParams::center_frequencies();
    std::size_t band = 0;
    for (std::size_t i = 0; i < centers.size(); ++i)
      if (std::fabs(std::log(centers[i] / 1000.0)) < std::fabs(std::log(centers[band] / 1000.0))) band = i;
    fx::GraphicEqParams g;
    g.gains_db[band] = 6.0;
    const auto r = fit_parametric_from_graphic(g);
    const auto freqs = fit_frequencies();
    CHECK(rms_db_error(fx::eq_response_db(r.params, freqs, 44100), fx::graphic_eq_response_db(g, freqs, 44100)) < 1.5);
    CHECK(r.residual_rms_db < 1.5);
  }

  TEST_CASE("fit frequencies are log-spaced and stay clear of Nyquist") {
    const auto f = fit_frequencies();
    CHECK(f.size() == kFitFrequencies);
    CHECK(f.front() == doctest::Approx(20.0));
    CHECK(f.back() == doctest::Approx(0.45 * 44100));
    CHECK(fit_frequencies(48000).back() == doctest::Approx(20000.0));
  }
}

TEST_SUITE("pipeline") {
  TEST_CASE("mini corpus stage counts before the probe") {
    const auto want = expected_manifest();
    const auto raw = load_socialfx(fs::path(TEXTFX_REPO_DATA) / want["csv"].get<std::string>());
    const auto rules = load_merge_rules(fs::path(TEXTFX_REPO_DATA) / want["rules"].get<std::string>());
    CHECK(raw.examples.size() == 60);
    CHECK(raw.skipped == 0);
    PipelineOptions opts;
    opts.eq_tf_threshold = want["eq_threshold"].get<std::size_t>();
    opts.reverb_tf_threshold = want["reverb_threshold"].get<std::size_t>();
    opts.run_probe = false;
    const auto corpus = run_pipeline(raw, rules, evalkit::synthesized_fixtures(0.25), opts);
    const auto got = pipeline_summary(corpus);
    for (const char* fx : {"eq", "reverb"}) {
      CAPTURE(fx);
      for (const char* stage : {"raw", "merged", "tf"}) {
        CAPTURE(stage);
        CHECK(got[fx]["stages"][stage]["examples"] == want[fx]["stages"][stage]["examples"]);
        CHECK(got[fx]["stages"][stage]["vocabulary"] == want[fx]["stages"][stage]["vocabulary"]);
      }
      CHECK(got[fx]["dropped"]["tf"] == want[fx]["dropped"]["tf"]);
    }
    // Monotone stages and thresholds.
    for (const auto& [fx, log] : corpus.logs) {
      CHECK(log.merged.examples <= log.raw.examples);
      CHECK(log.merged.vocabulary <= log.raw.vocabulary);
      CHECK(log.tf.vocabulary <= log.merged.vocabulary);
      for (const auto& [w, c] : log.counts) CHECK(c >= log.tf_threshold);
    }
    // Every reference word has its fitted parameter sets.
    const auto& eq = corpus.references.at(fx::FxType::Eq);
    for (const auto& w : eq.words) {
      CHECK(w.param_sets.size() == w.render_sets.size());
      CHECK(std::holds_alternative<fx::GraphicEqParams>(w.render_sets.front()));
    }
  }

  TEST_CASE("corpus round trips through disk") {
    const auto dir = fs::temp_directory_path() / "textfx_dataset_test_corpus";
    fs::remove_all(dir);
    std::vector<RawExample> rows;
    Rng rng(1);
    for (int i = 0; i < 6; ++i) {
      auto r = eq_row("e" + std::to_string(i), {i % 2 ? "warm" : "bright"});
      for (auto& v : r.params_native) v = rng.uniform(-3.0, 3.0);
      rows.push_back(r);
    }
    for (int i = 0; i < 4; ++i) {
      RawExample r{"r" + std::to_string(i), fx::FxType::Reverb, {"church"}, {}};
      for (int k = 0; k < 25; ++k) r.params_native.push_back(k < 12 ? 0.5 : (k < 24 ? 1.5 : 0.4));
      rows.push_back(r);
    }
    const auto fixtures = evalkit::synthesized_fixtures(0.25);
    PipelineOptions opts;
    opts.eq_tf_threshold = 1;
    opts.reverb_tf_threshold = 1;
    opts.run_probe = false;
    const auto corpus = run_pipeline({rows, 0, {}}, {}, fixtures, opts);
    evalkit::RenderCache cache;
    const auto manifest = write_corpus(dir, corpus, fixtures, opts, cache);
    const auto loaded = load_corpus(dir, fixtures);
    CHECK(loaded.references.at(fx::FxType::Eq).words.size() == 2);
    CHECK(loaded.references.at(fx::FxType::Reverb).words.size() == 1);
    CHECK(loaded.manifest["eq"]["counts"]["warm"] == 3);

    // Rewriting the same corpus yields the same manifest.
    evalkit::RenderCache cache2;
    CHECK(write_corpus(dir, corpus, fixtures, opts, cache2) == manifest);
    fs::remove_all(dir);
    CHECK(code_of([&] { load_corpus(dir, fixtures); }) == ErrorCode::MissingCorpus);
  }
}
