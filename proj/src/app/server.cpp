#include "textfx/app/server.hpp"

#include <httplib.h>
#include <json.hpp>

#include <mutex>

#include "textfx/app/cli.hpp"
#include "textfx/core/wav.hpp"
#include "textfx/evalkit/render.hpp"
#include "textfx/features/features.hpp"
#include "textfx/fx/reverb.hpp"
#include "textfx/textgen/fewshot.hpp"
#include "textfx/textgen/generate.hpp"
#include "textfx/textgen/serialize.hpp"

namespace textfx::app {
namespace {

using nlohmann::json;

constexpr const char* kJson = "application/json";

void send_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  res.status = http_status(code);
  res.set_content(error_json(to_string(code), message), kJson);
}

std::vector<std::uint8_t> to_bytes(const std::string& s) { return {s.begin(), s.end()}; }

bool truthy(const json& doc, const char* key) {
  if (!doc.contains(key)) return false;
  const auto& v = doc[key];
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_object()) return true;
  fail(ErrorCode::InvalidArgument, std::string("\"") + key + "\" must be a boolean");
}

}  // namespace

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::BackendUnreachable:
    case ErrorCode::AuthMissing:
    case ErrorCode::ParseFailure:
      return 502;
    case ErrorCode::MissingFixture:
      return 404;
    case ErrorCode::IoError:
      return 500;
    default:
      return 400;
  }
}

struct Server::Impl {
  AppConfig cfg;
  std::shared_ptr<textgen::LlmBackend> llm;
  std::unique_ptr<textgen::TranscriptLog> log;
  httplib::Server http;

  std::once_flag fixtures_once;
  std::vector<evalkit::Fixture> fixtures;

  const std::vector<evalkit::Fixture>& dry_fixtures() {
    std::call_once(fixtures_once, [&] { fixtures = evalkit::synthesized_fixtures(); });
    return fixtures;
  }

  const evalkit::Fixture& fixture(const std::string& name) {
    for (const auto& f : dry_fixtures())
      if (f.instrument == name) return f;
    fail(ErrorCode::MissingFixture, "no fixture named \"" + name + "\"");
  }

  // Runs a handler body, mapping textfx errors to status codes and JSON.
  template <typename Fn>
  httplib::Server::Handler guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const Error& e) {
        send_error(res, e.code(), e.what());
      } catch (const json::exception& e) {
        send_error(res, ErrorCode::SchemaError, e.what());
      } catch (const std::exception& e) {
        res.status = 500;
        res.set_content(error_json("Internal", e.what()), kJson);
      }
    };
  }

  // Upload from multipart field "audio" or a raw WAV body.
  wav::WavFile request_audio(const httplib::Request& req) {
    if (req.is_multipart_form_data()) {
      if (req.has_file("audio")) return wav::decode(to_bytes(req.get_file_value("audio").content));
      if (req.has_file("fixture")) {
        const auto& f = fixture(req.get_file_value("fixture").content);
        return {f.audio, wav::SampleFormat::Float32};
      }
      fail(ErrorCode::InvalidArgument, "multipart request needs an \"audio\" or \"fixture\" field");
    }
    if (req.body.empty()) fail(ErrorCode::InvalidAudio, "empty request body");
    return wav::decode(to_bytes(req.body));
  }

  void routes() {
    http.Get("/api/health", guarded([](const httplib::Request&, httplib::Response& res) {
               res.set_content(R"({"status":"ok"})", kJson);
             }));

    http.Get("/api/fixtures", guarded([this](const httplib::Request&, httplib::Response& res) {
               json list = json::array();
               for (const auto& f : dry_fixtures())
                 list.push_back({{"name", f.instrument},
                                 {"sample_rate", f.audio.sample_rate()},
                                 {"channels", f.audio.channels()},
                                 {"frames", f.audio.frames()},
                                 {"duration_seconds", f.audio.duration_seconds()},
                                 {"url", "/api/fixtures/" + f.instrument + ".wav"}});
               res.set_content(json{{"fixtures", list}}.dump(), kJson);
             }));

    http.Get(R"(/api/fixtures/([a-z]+)\.wav)", guarded([this](const httplib::Request& req, httplib::Response& res) {
               const auto bytes = wav::encode(fixture(req.matches[1]).audio, wav::SampleFormat::Float32);
               res.set_content(std::string(bytes.begin(), bytes.end()), "audio/wav");
             }));

    http.Post("/api/features", guarded([this](const httplib::Request& req, httplib::Response& res) {
                const auto f = features::extract_features(request_audio(req).audio);
                res.set_content(features::serialize_features(f), kJson);
              }));

    http.Post("/api/render", guarded([this](const httplib::Request& req, httplib::Response& res) {
                if (!req.is_multipart_form_data())
                  fail(ErrorCode::InvalidArgument, "render expects multipart/form-data");
                if (!req.has_file("params")) fail(ErrorCode::InvalidArgument, "missing \"params\" field");
                const auto input = request_audio(req);
                const auto params = textgen::detect_param_file(req.get_file_value("params").content);
                std::uint64_t seed = 0;
                if (req.has_file("seed")) {
                  const auto& text = req.get_file_value("seed").content;
                  try {
                    std::size_t used = 0;
                    seed = std::stoull(text, &used);
                    if (used != text.size()) throw std::invalid_argument(text);
                  } catch (const std::exception&) {
                    fail(ErrorCode::InvalidArgument, "seed must be a non-negative integer");
                  }
                }
                bool limited = false;
                AudioBuffer wet;
                if (const auto* rv = std::get_if<fx::ReverbParams>(&params)) {
                  auto r = fx::apply_reverb(input.audio, *rv, seed);
                  limited = r.peak_limited;
                  wet = std::move(r.audio);
                } else {
                  wet = evalkit::render(input.audio, params, seed);
                }
                const auto bytes = wav::encode(wet, input.format);
                res.set_header("X-Peak-Limited", limited ? "true" : "false");
                res.set_header("X-Render-Seed", std::to_string(seed));
                res.set_content(std::string(bytes.begin(), bytes.end()), "audio/wav");
              }));

    http.Post("/api/generate", guarded([this](const httplib::Request& req, httplib::Response& res) {
                const json body = json::parse(req.body, nullptr, false);
                if (body.is_discarded() || !body.is_object())
                  fail(ErrorCode::SchemaError, "generate expects a JSON object");
                const auto fx_label = body.value("fx_type", std::string());
                const auto fx_type = fx::parse_fx_type(fx_label);
                if (!fx_type) fail(ErrorCode::InvalidArgument, "unknown fx_type \"" + fx_label + "\"");

                textgen::GenerationRequest gr;
                gr.timbre_word = body.value("word", std::string());
                gr.instrument = body.value("instrument", std::string());
                gr.fx_type = *fx_type;
                gr.trials = body.value("trials", std::size_t{1});
                gr.seed = body.value("seed", cfg.seed);
                gr.context.include_code = truthy(body, "code");
                if (truthy(body, "fewshot")) gr.context.fewshot = textgen::default_fewshot(*fx_type);
                if (truthy(body, "features")) {
                  gr.context.include_features = true;
                  if (body["features"].is_object()) {
                    gr.context.features = features::parse_features(body["features"].dump());
                  } else {
                    const auto name = body.value("fixture", gr.instrument);
                    gr.context.features = features::extract_features(fixture(name).audio);
                  }
                }
                gr.check();

                textgen::GenerateOptions opts;
                opts.max_in_flight = cfg.parallelism;
                opts.log = log.get();
                const auto outcomes = textgen::generate(gr, *llm, cfg.backend, opts);
                const textgen::TrialOutcome* first = nullptr;
                std::size_t failed = 0;
                for (const auto& t : outcomes) {
                  if (t.result && !first) first = &t;
                  if (!t.result) ++failed;
                }
                if (!first) {
                  const auto& e = *outcomes.front().error;
                  send_error(res, e.code, "no trial succeeded: " + e.message);
                  return;
                }
                nlohmann::ordered_json out;
                out["fx_type"] = fx_label;
                out["params"] = textgen::to_json(first->result->params).begin().value();
                out["clamped_fields"] = first->result->clamped_fields;
                out["warnings"] = first->result->warnings;
                out["transcript_id"] = first->transcript_id;
                out["trial"] = first->trial;
                out["trials_ok"] = outcomes.size() - failed;
                out["trials_failed"] = failed;
                out["prompt"] = first->result->prompt_transcript;
                out["raw_text"] = first->result->raw_text;
                res.set_content(out.dump(-1, ' ', false, json::error_handler_t::replace), kJson);
              }));
  }
};

Server::Server(AppConfig cfg, textgen::MockConfig mock)
    : Server(cfg, std::shared_ptr<textgen::LlmBackend>(textgen::make_backend(cfg.backend, std::move(mock)))) {}

Server::Server(AppConfig cfg, std::shared_ptr<textgen::LlmBackend> llm) : impl_(std::make_unique<Impl>()) {
  cfg.check();
  impl_->cfg = std::move(cfg);
  impl_->llm = std::move(llm);
  if (!impl_->cfg.transcript_log.empty())
    impl_->log = std::make_unique<textgen::TranscriptLog>(impl_->cfg.transcript_log);
  impl_->http.set_payload_max_length(512ull << 20);
  impl_->routes();
}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->http.bind_to_any_port(host);
    if (bound < 0) fail(ErrorCode::IoError, "cannot bind " + host);
    return bound;
  }
  if (!impl_->http.bind_to_port(host, port))
    fail(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void Server::listen() { impl_->http.listen_after_bind(); }

void Server::stop() {
  if (impl_) impl_->http.stop();
}

void Server::wait_until_ready() const { impl_->http.wait_until_ready(); }

}  // namespace textfx::app
