#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "support/parser_corpus.hpp"
#include "textfx/core/error.hpp"
#include "textfx/features/features.hpp"
#include "textfx/textgen/backend.hpp"
#include "textfx/textgen/fewshot.hpp"
#include "textfx/textgen/generate.hpp"
#include "textfx/textgen/parser.hpp"
#include "textfx/textgen/prompt.hpp"

using namespace textfx;
using namespace textfx::textgen;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

constexpr const char* kFeatureText = R"({"sample_rate": 44100, "rms_energy": 0.04, "crest_factor": 11.86,
  "dynamic_spread": 0.06, "spectral_centroid": 1476.24, "spectral_flatness": 0.01,
  "spectral_bandwidth": 1796.65, "estimated_rt60": 2.94})";

GenerationRequest reference_request() {
  GenerationRequest r;
  r.timbre_word = "church";
  r.instrument = "guitar";
  r.fx_type = fx::FxType::Reverb;
  r.context.include_code = true;
  r.context.include_features = true;
  r.context.features = features::parse_features(kFeatureText);
  r.context.fewshot = default_fewshot(fx::FxType::Reverb);
  return r;
}

ErrorCode parse_error(std::string_view raw, fx::FxType fx) {
  try {
    parse_params(raw, fx);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("parse unexpectedly succeeded");
  return ErrorCode::InvalidArgument;
}

bool params_close(const fx::ParamSet& a, const fx::ParamSet& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) {
        const auto& y = std::get<std::decay_t<decltype(x)>>(b);
        const auto u = x.to_array(), v = y.to_array();
        for (std::size_t i = 0; i < u.size(); ++i)
          if (std::fabs(u[i] - v[i]) > 1e-9) return false;
        return true;
      },
      a);
}

struct EnvGuard {
  std::string name;
  EnvGuard(std::string n, const char* value) : name(std::move(n)) {
    if (value) setenv(name.c_str(), value, 1);
    else unsetenv(name.c_str());
  }
  ~EnvGuard() { unsetenv(name.c_str()); }
};

}  // namespace

TEST_SUITE("prompt") {
  TEST_CASE("reference transcript is reproduced byte for byte") {
    const auto golden = slurp(fs::path(TEXTFX_TEST_DATA) / "golden_reverb_transcript.txt");
    CHECK(assemble_prompt(reference_request()).transcript() == golden);
  }

  TEST_CASE("system prompt selects the schema") {
    const auto rv = build_system_prompt(fx::FxType::Reverb);
    CHECK(rv.find("You are an expert audio engineer") == 0);
    for (auto k : fx::ReverbParams::keys()) CHECK(rv.find("\"" + std::string(k) + "\": float") != std::string::npos);

    const auto eq = build_system_prompt(fx::FxType::Eq);
    for (auto k : fx::EqParams::keys()) CHECK(eq.find("\"" + std::string(k) + "\"") != std::string::npos);
    CHECK(eq.find("band0_gain") == std::string::npos);
    CHECK(eq.find("decay") == std::string::npos);
    CHECK(eq == build_system_prompt(fx::FxType::Eq));
    CHECK(build_system_prompt(fx::FxType::Eq, 48000).find("48000") != std::string::npos);
  }

  TEST_CASE("query phrasing") {
    CHECK(build_user_query("warm", "piano", fx::FxType::Eq) == "Please design a eq audio effect for a warm piano sound.");
    CHECK(build_user_query("church", "guitar", fx::FxType::Reverb, QueryStyle::FewShot) ==
          "please design a reverb audio effects for a church guitar sound.");
    CHECK_THROWS_AS(build_user_query("", "piano", fx::FxType::Eq), Error);
  }

  TEST_CASE("zero-shot context is empty and carries no headed sections") {
    CHECK(build_context({}, fx::FxType::Eq).empty());
    GenerationRequest r;
    r.timbre_word = "warm";
    r.instrument = "piano";
    const auto p = assemble_prompt(r);
    CHECK(p.user == "Please design a eq audio effect for a warm piano sound.");
    CHECK(p.user.find('#') == std::string::npos);
  }

  TEST_CASE("context sections appear in fixed order") {
    auto r = reference_request();
    const auto ctx = build_context(r.context, fx::FxType::Reverb);
    const auto a = ctx.find("# Signal processing function");
    const auto b = ctx.find("# Input audio feature");
    const auto c = ctx.find("# Incontext examples");
    CHECK(a == 0);
    CHECK(a < b);
    CHECK(b < c);
    std::size_t questions = 0;
    for (auto pos = ctx.find("QUESTION: "); pos != std::string::npos; pos = ctx.find("QUESTION: ", pos + 1)) ++questions;
    CHECK(questions == 5);
  }

  TEST_CASE("few-shot examples must match the effect") {
    ContextConfig cfg;
    cfg.fewshot = default_fewshot(fx::FxType::Eq);
    try {
      build_context(cfg, fx::FxType::Reverb);
      FAIL("expected SchemaMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SchemaMismatch);
    }
    ContextConfig big;
    big.fewshot.assign(17, default_fewshot(fx::FxType::Eq).front());
    CHECK_THROWS_AS(big.check(), Error);
    ContextConfig nofeat;
    nofeat.include_features = true;
    CHECK_THROWS_AS(nofeat.check(), Error);
  }
}

TEST_SUITE("serialize") {
  TEST_CASE("float formatting follows Python repr") {
    CHECK(format_float(0.0) == "0.0");
    CHECK(format_float(0.1) == "0.1");
    CHECK(format_float(19.5) == "19.5");
    CHECK(format_float(0.001) == "0.001");
    CHECK(format_float(0.0001) == "0.0001");
    CHECK(format_float(0.00001) == "1e-05");
    CHECK(format_float(1e16) == "1e+16");
    CHECK(format_float(1234567.0) == "1234567.0");
    CHECK(format_float(-2.5) == "-2.5");
    CHECK(format_float(1.0 / 3.0) == "0.3333333333333333");
  }

  TEST_CASE("python repr of a few-shot answer") {
    const auto& ex = default_fewshot(fx::FxType::Reverb).front();
    const auto text = to_python_repr(ex.params);
    CHECK(text.rfind("{'reverb': {'band0_gain': 0.0, ", 0) == 0);
    CHECK(text.find("'band11_decay': 0.1, 'mix': 0.8}}") != std::string::npos);
  }

  TEST_CASE("parameter files are detected by schema") {
    CHECK(std::holds_alternative<fx::ReverbParams>(detect_param_file(slurp(fs::path(TEXTFX_TEST_DATA) / "reverb_example.json"))));
    CHECK(std::holds_alternative<fx::EqParams>(detect_param_file(to_pretty_json(fx::EqParams{}))));
    fx::GraphicEqParams g;
    g.gains_db[3] = 2.5;
    const auto back = detect_param_file(to_json(g).dump());
    REQUIRE(std::holds_alternative<fx::GraphicEqParams>(back));
    CHECK(std::get<fx::GraphicEqParams>(back) == g);
  }
}

TEST_SUITE("parser") {
  TEST_CASE("reference output object") {
    const auto parsed = parse_params(slurp(fs::path(TEXTFX_TEST_DATA) / "reverb_example.json"), fx::FxType::Reverb);
    const auto& p = std::get<fx::ReverbParams>(parsed.params);
    CHECK(p.band_gain[0] == 0.0);
    CHECK(p.band_decay[11] == 0.1);
    CHECK(p.mix == 0.7);
    CHECK(parsed.clamped_fields.empty());
  }

  TEST_CASE("out-of-range values are clamped and reported") {
    auto j = to_json(fx::ParamSet{default_fewshot(fx::FxType::Reverb).front().params});
    j["reverb"]["mix"] = 1.7;
    j["reverb"]["extra"] = 3;
    const auto parsed = parse_params(j.dump(), fx::FxType::Reverb);
    CHECK(std::get<fx::ReverbParams>(parsed.params).mix == 1.0);
    CHECK(parsed.clamped_fields == std::vector<std::string>{"mix"});
    CHECK(parsed.warnings.size() == 1);
  }

  TEST_CASE("error taxonomy") {
    CHECK(parse_error("no braces here", fx::FxType::Eq) == ErrorCode::NoJsonFound);
    CHECK(parse_error("{\"low_shelf_gain_db\": 1.0}", fx::FxType::Eq) == ErrorCode::MissingKeys);
    CHECK(parse_error(to_pretty_json(fx::EqParams{}), fx::FxType::Reverb) == ErrorCode::WrongEffect);
    CHECK(parse_error(to_json(fx::ParamSet{fx::ReverbParams{}}).begin().value().dump(), fx::FxType::Eq) ==
          ErrorCode::WrongEffect);
    try {
      parse_params("{\"low_shelf_gain_db\": 1.0}", fx::FxType::Eq);
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("high_shelf_q") != std::string::npos);
    }
  }

  TEST_CASE("every prose-wrapped object is recovered") {
    const auto corpus = oracle::parser_fuzz_corpus(2024);
    CHECK(corpus.size() == 2 * 5 * 4 * oracle::wrap_templates().size());
    std::size_t ok = 0;
    for (const auto& c : corpus) {
      try {
        if (params_close(parse_params(c.text, fx::fx_type_of(c.expected)).params, c.expected)) ++ok;
        else MESSAGE("mismatch: " << c.text.substr(0, 120));
      } catch (const Error& e) {
        MESSAGE(e.what() << " in: " << c.text.substr(0, 120));
      }
    }
    CHECK(ok == corpus.size());
  }

  TEST_CASE("round trip through every serialization") {
    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
      const auto fx = i % 2 ? fx::FxType::Eq : fx::FxType::Reverb;
      const auto p = fx::sample_uniform(fx, rng);
      CHECK(params_close(parse_params(to_pretty_json(p), fx).params, p));
      CHECK(params_close(parse_params(to_python_repr(p), fx).params, p));
    }
  }

  TEST_CASE("arbitrary bytes never escape as anything but textfx errors") {
    Rng rng(99);
    const std::string alphabet = "{}[]\"':,. 0123456789abcdefghijklmnopqrstuvwxyz_-+eE\n\t\\`";
    std::size_t errors = 0;
    for (int i = 0; i < 20000; ++i) {
      std::string s(rng.below(200), '\0');
      for (auto& ch : s) ch = rng.below(3) == 0 ? static_cast<char>(rng.below(256)) : alphabet[rng.below(alphabet.size())];
      try {
        parse_params(s, i % 2 ? fx::FxType::Eq : fx::FxType::Reverb);
      } catch (const Error&) {
        ++errors;
      }
    }
    CHECK(errors > 0);
  }
}

TEST_SUITE("generation") {
  TEST_CASE("mock echo returns the chosen few-shot answer") {
    auto req = reference_request();
    req.trials = 3;
    MockConfig m;
    m.mode = MockMode::EchoFewShot;
    m.echo_index = 2;
    MockBackend llm(m);
    const auto out = generate(req, llm, {});
    REQUIRE(out.size() == 3);
    for (const auto& t : out) {
      REQUIRE(t.ok());
      CHECK(t.result->params == req.context.fewshot[1].params);
    }
  }

  TEST_CASE("fifty rule-based trials are valid, diverse and deterministic") {
    GenerationRequest req;
    req.timbre_word = "warm";
    req.instrument = "guitar";
    req.trials = 50;
    req.seed = 7;
    MockBackend llm;
    const auto a = generate(req, llm, {});
    const auto b = generate(req, llm, {}, {.max_in_flight = 1});
    REQUIRE(a.size() == 50);
    std::set<std::string> distinct;
    for (std::size_t i = 0; i < 50; ++i) {
      REQUIRE(a[i].ok());
      CHECK(a[i].result->params == b[i].result->params);
      CHECK(a[i].transcript_id == b[i].transcript_id);
      CHECK_NOTHROW(fx::validate(std::get<fx::EqParams>(a[i].result->params), 44100));
      distinct.insert(a[i].result->raw_text);
    }
    CHECK(distinct.size() == 50);
    req.seed = 8;
    CHECK_FALSE(generate(req, llm, {})[0].result->params == a[0].result->params);
  }

  TEST_CASE("prose responses keep raw text; failures retry then record errors") {
    GenerationRequest req;
    req.timbre_word = "bright";
    req.instrument = "piano";
    req.trials = 4;
    const std::string obj = to_pretty_json(fx::EqParams{});
    std::atomic<int> calls{0};
    FunctionBackend llm([&](const ChatRequest& c) -> std::string {
      ++calls;
      if (c.trial == 3) return "I cannot help with that.";
      return "Sure! ```json\n" + obj + "\n```";
    });
    BackendConfig cfg;
    cfg.max_retries = 2;
    const auto out = generate(req, llm, cfg);
    CHECK(out[0].result->raw_text.rfind("Sure!", 0) == 0);
    CHECK(out[0].attempts == 1);
    REQUIRE_FALSE(out[3].ok());
    CHECK(out[3].attempts == 3);
    CHECK(out[3].error->code == ErrorCode::NoJsonFound);
    CHECK(calls.load() == 6);
    CHECK(successful_results(out).size() == 3);
  }

  TEST_CASE("transcript log records one line per trial") {
    const auto path = fs::temp_directory_path() / "textfx_transcript_test.jsonl";
    fs::remove(path);
    TranscriptLog log(path);
    GenerationRequest req;
    req.timbre_word = "echo";
    req.instrument = "drums";
    req.fx_type = fx::FxType::Reverb;
    req.trials = 5;
    MockBackend llm;
    const auto out = generate(req, llm, {}, {.log = &log});
    std::ifstream in(path);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      const auto j = nlohmann::json::parse(line);
      CHECK(j["trial"] == n);
      CHECK(j["fx_type"] == "reverb");
      CHECK(j.contains("params"));
      CHECK(out[n].transcript_id.size() == 16);
      ++n;
    }
    CHECK(n == 5);
    fs::remove(path);
  }

  TEST_CASE("uniform and replay mocks") {
    GenerationRequest req;
    req.timbre_word = "hall";
    req.instrument = "piano";
    req.fx_type = fx::FxType::Reverb;
    req.trials = 4;
    MockConfig m;
    m.mode = MockMode::Replay;
    const fx::ReverbParams r1 = std::get<fx::ReverbParams>(fx::sample_uniform(fx::FxType::Reverb, *std::make_unique<Rng>(1)));
    const fx::ReverbParams r2 = std::get<fx::ReverbParams>(fx::sample_uniform(fx::FxType::Reverb, *std::make_unique<Rng>(2)));
    m.replay[{fx::FxType::Reverb, "hall"}] = {r1, r2};
    MockBackend replay(m);
    const auto out = generate(req, replay, {});
    CHECK(params_close(out[0].result->params, r1));
    CHECK(params_close(out[1].result->params, r2));
    CHECK(params_close(out[2].result->params, r1));

    MockBackend uniform(MockConfig{.mode = MockMode::Uniform});
    const auto u = generate(req, uniform, {});
    CHECK_FALSE(u[0].result->params == u[1].result->params);
  }
}

TEST_SUITE("http backend") {
  TEST_CASE("missing key is AuthMissing before any request") {
    EnvGuard env("TEXTFX_TEST_KEY_UNSET", nullptr);
    BackendConfig cfg{BackendKind::HttpChat, "http://127.0.0.1:9", "m", "TEXTFX_TEST_KEY_UNSET"};
    HttpChatBackend llm(cfg);
    try {
      llm.complete({});
      FAIL("expected AuthMissing");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::AuthMissing);
    }
    GenerationRequest req;
    req.timbre_word = "warm";
    req.instrument = "piano";
    CHECK_THROWS_AS(generate(req, llm, cfg), Error);
  }

  TEST_CASE("http_chat configuration requires endpoint and model") {
    BackendConfig cfg;
    cfg.kind = BackendKind::HttpChat;
    CHECK_THROWS_AS(cfg.check(), Error);
  }

  TEST_CASE("chat completion wire format against a local server") {
    httplib::Server srv;
    nlohmann::json seen;
    std::string auth;
    srv.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
      seen = nlohmann::json::parse(req.body);
      auth = req.get_header_value("Authorization");
      if (seen["model"] == "reject") {
        res.status = 401;
        return;
      }
      nlohmann::json reply = {{"choices", {{{"message", {{"role", "assistant"},
                                                          {"content", "Here: " + to_pretty_json(fx::EqParams{})}}}}}}};
      res.set_content(reply.dump(), "application/json");
    });
    const int port = srv.bind_to_any_port("127.0.0.1");
    std::thread th([&] { srv.listen_after_bind(); });
    srv.wait_until_ready();

    EnvGuard env("TEXTFX_TEST_KEY", "secret");
    BackendConfig cfg{BackendKind::HttpChat, "http://127.0.0.1:" + std::to_string(port) + "/v1", "model-x",
                      "TEXTFX_TEST_KEY", 0.3, 5.0, 0};
    HttpChatBackend llm(cfg);
    ChatRequest req{"SYS", "USER", 0.3, 11};
    const auto text = llm.complete(req);
    CHECK(text.rfind("Here: ", 0) == 0);
    CHECK(auth == "Bearer secret");
    CHECK(seen["model"] == "model-x");
    CHECK(seen["messages"][0]["role"] == "system");
    CHECK(seen["messages"][0]["content"] == "SYS");
    CHECK(seen["messages"][1]["content"] == "USER");
    CHECK(seen["temperature"] == 0.3);
    CHECK(seen["seed"] == 11);

    cfg.model_name = "reject";
    HttpChatBackend rejected(cfg);
    try {
      rejected.complete(req);
      FAIL("expected AuthMissing");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::AuthMissing);
    }
    srv.stop();
    th.join();

    cfg.model_name = "model-x";
    HttpChatBackend gone(cfg);
    try {
      gone.complete(req);
      FAIL("expected BackendUnreachable");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BackendUnreachable);
    }
  }
}
