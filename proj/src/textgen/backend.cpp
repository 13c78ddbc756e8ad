#include "textfx/textgen/backend.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <unordered_map>

#include "textfx/core/error.hpp"
#include "textfx/core/random.hpp"
#include "textfx/textgen/serialize.hpp"

namespace textfx::textgen {
namespace {

using nlohmann::json;

struct EqShape {
  double low, b1, b2, b3, b4, high;
};

struct ReverbShape {
  double low_gain, high_gain;    // linear gain at band 0 and band 11
  double low_decay, high_decay;  // seconds at band 0 and band 11
  double mix;
};

const std::unordered_map<std::string, EqShape>& eq_shapes() {
  static const std::unordered_map<std::string, EqShape> shapes = {
      {"warm", {4.0, 3.0, 1.0, -1.0, -2.0, -4.0}},   {"bright", {-2.0, -1.0, 0.0, 2.0, 3.0, 6.0}},
      {"soft", {1.0, 1.0, -1.0, -2.0, -3.0, -4.0}},  {"harsh", {-3.0, -2.0, 1.0, 5.0, 4.0, 2.0}},
      {"calm", {1.0, 0.5, -0.5, -1.5, -2.0, -2.5}},  {"loud", {4.0, 2.0, 2.0, 3.0, 3.0, 4.0}},
      {"heavy", {6.0, 4.0, 1.0, -1.0, -1.0, -2.0}},  {"happy", {1.0, 0.0, 1.0, 2.0, 2.0, 3.0}},
      {"cool", {-1.0, -1.0, 0.0, 1.0, 1.0, 2.0}},    {"muffled", {2.0, 3.0, 1.0, -4.0, -6.0, -9.0}},
      {"thin", {-6.0, -4.0, -1.0, 1.0, 2.0, 2.0}},   {"dark", {2.0, 1.0, 0.0, -2.0, -4.0, -6.0}},
  };
  return shapes;
}

const std::unordered_map<std::string, ReverbShape>& reverb_shapes() {
  static const std::unordered_map<std::string, ReverbShape> shapes = {
      {"echo", {0.3, 0.6, 1.5, 1.0, 0.7}},      {"distant", {0.6, 0.3, 3.0, 1.5, 0.8}},
      {"spacious", {0.7, 0.6, 4.0, 2.5, 0.6}},  {"muffled", {0.8, 0.05, 1.5, 0.2, 0.5}},
      {"church", {0.8, 0.5, 6.0, 3.0, 0.7}},    {"hall", {0.7, 0.5, 3.5, 2.0, 0.5}},
      {"room", {0.5, 0.4, 0.8, 0.5, 0.3}},      {"warm", {0.8, 0.2, 2.5, 1.0, 0.4}},
      {"bright", {0.3, 0.9, 1.2, 1.5, 0.4}},    {"dry", {0.2, 0.2, 0.3, 0.2, 0.1}},
      {"cathedral", {0.9, 0.6, 8.0, 4.0, 0.8}}, {"small", {0.4, 0.4, 0.4, 0.3, 0.2}},
  };
  return shapes;
}

fx::EqParams eq_from_shape(const EqShape& s) {
  fx::EqParams p;
  p.low_shelf.gain_db = s.low;
  p.peaks[0].gain_db = s.b1;
  p.peaks[1].gain_db = s.b2;
  p.peaks[2].gain_db = s.b3;
  p.peaks[3].gain_db = s.b4;
  p.high_shelf.gain_db = s.high;
  return p;
}

fx::ReverbParams reverb_from_shape(const ReverbShape& s) {
  fx::ReverbParams p;
  for (std::size_t b = 0; b < fx::ReverbParams::kBands; ++b) {
    const double t = static_cast<double>(b) / (fx::ReverbParams::kBands - 1);
    p.band_gain[b] = s.low_gain + t * (s.high_gain - s.low_gain);
    p.band_decay[b] = s.low_decay + t * (s.high_decay - s.low_decay);
  }
  p.mix = s.mix;
  return p;
}

template <typename P>
P jittered(const P& base, double amount, Rng& rng) {
  auto values = base.to_array();
  for (double& v : values) v *= 1.0 + rng.uniform(-amount, amount);
  return P::from_array(values);
}

// Splits "scheme://host[:port][/path]" into the client origin and a path
// prefix without trailing slash.
std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) fail(ErrorCode::InvalidArgument, "endpoint_url needs a scheme: " + url);
  const auto slash = url.find('/', scheme_end + 3);
  std::string origin = url.substr(0, slash);
  std::string path = slash == std::string::npos ? "" : url.substr(slash);
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {origin, path};
}

}  // namespace

HttpChatBackend::HttpChatBackend(BackendConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.check();
  std::tie(scheme_host_port_, path_) = split_url(cfg_.endpoint_url);
}

std::string HttpChatBackend::request_body(const ChatRequest& req) const {
  json body = {
      {"model", cfg_.model_name},
      {"messages", json::array({{{"role", "system"}, {"content", req.system}},
                                {{"role", "user"}, {"content", req.user}}})},
      {"temperature", req.temperature},
      {"seed", req.seed},
  };
  return body.dump();
}

std::string HttpChatBackend::complete(const ChatRequest& req) {
  const char* key = std::getenv(cfg_.api_key_env.c_str());
  if (key == nullptr || *key == '\0')
    fail(ErrorCode::AuthMissing, "environment variable " + cfg_.api_key_env + " is not set");

  httplib::Client client(scheme_host_port_);
  const auto secs = static_cast<time_t>(cfg_.timeout_seconds);
  const auto usecs = static_cast<time_t>((cfg_.timeout_seconds - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  const httplib::Headers headers = {{"Authorization", std::string("Bearer ") + key}};

  auto res = client.Post(path_ + "/chat/completions", headers, request_body(req), "application/json");
  if (!res) fail(ErrorCode::BackendUnreachable, "request failed: " + httplib::to_string(res.error()));
  if (res->status == 401 || res->status == 403)
    fail(ErrorCode::AuthMissing, "backend rejected credentials (HTTP " + std::to_string(res->status) + ")");
  if (res->status != 200)
    fail(ErrorCode::BackendUnreachable, "backend returned HTTP " + std::to_string(res->status));

  const json doc = json::parse(res->body, nullptr, false);
  if (doc.is_discarded()) fail(ErrorCode::ParseFailure, "completion response is not JSON");
  const json* content = nullptr;
  if (doc.contains("choices") && doc["choices"].is_array() && !doc["choices"].empty()) {
    const auto& choice = doc["choices"][0];
    if (choice.contains("message") && choice["message"].contains("content"))
      content = &choice["message"]["content"];
  }
  if (content == nullptr || !content->is_string())
    fail(ErrorCode::ParseFailure, "completion response has no message content");
  return content->get<std::string>();
}

MockBackend::MockBackend(MockConfig cfg) : cfg_(std::move(cfg)) {}

fx::ParamSet MockBackend::rule_based_answer(const std::string& word, const std::string& instrument,
                                            fx::FxType fx) {
  if (fx == fx::FxType::Eq) {
    if (auto it = eq_shapes().find(word); it != eq_shapes().end()) return eq_from_shape(it->second);
  } else {
    if (auto it = reverb_shapes().find(word); it != reverb_shapes().end())
      return reverb_from_shape(it->second);
  }
  // Unknown words get a stable pseudo-random answer of moderate strength.
  Rng rng(derive_seed(derive_seed(0x7e47u, word), instrument));
  if (fx == fx::FxType::Eq) {
    EqShape s{};
    for (double* g : {&s.low, &s.b1, &s.b2, &s.b3, &s.b4, &s.high}) *g = rng.uniform(-6.0, 6.0);
    return eq_from_shape(s);
  }
  return reverb_from_shape({rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9), rng.uniform(0.3, 4.0),
                            rng.uniform(0.2, 3.0), rng.uniform(0.2, 0.8)});
}

std::string MockBackend::complete(const ChatRequest& req) {
  Rng rng(req.seed);
  fx::ParamSet answer;
  switch (cfg_.mode) {
    case MockMode::Canned:
      return cfg_.canned_text;
    case MockMode::EchoFewShot: {
      if (cfg_.echo_index == 0 || cfg_.echo_index > req.fewshot.size())
        fail(ErrorCode::InvalidArgument, "mock echo index " + std::to_string(cfg_.echo_index) +
                                             " outside the " + std::to_string(req.fewshot.size()) +
                                             " supplied examples");
      answer = req.fewshot[cfg_.echo_index - 1].params;
      break;
    }
    case MockMode::Replay: {
      auto it = cfg_.replay.find({req.fx_type, req.timbre_word});
      if (it == cfg_.replay.end() || it->second.empty())
        fail(ErrorCode::InvalidArgument, "mock has no replay sets for \"" + req.timbre_word + "\"");
      answer = it->second[req.trial % it->second.size()];
      break;
    }
    case MockMode::Uniform:
      answer = fx::sample_uniform(req.fx_type, rng, cfg_.sample_rate);
      break;
    case MockMode::RuleBased: {
      const auto base = rule_based_answer(req.timbre_word, req.instrument, req.fx_type);
      answer = std::visit(
          [&](const auto& p) -> fx::ParamSet { return fx::clamp(jittered(p, cfg_.jitter, rng)).params; }, base);
      break;
    }
  }
  return to_pretty_json(answer);
}

std::unique_ptr<LlmBackend> make_backend(const BackendConfig& cfg, MockConfig mock) {
  cfg.check();
  if (cfg.kind == BackendKind::HttpChat) return std::make_unique<HttpChatBackend>(cfg);
  return std::make_unique<MockBackend>(std::move(mock));
}

}  // namespace textfx::textgen
