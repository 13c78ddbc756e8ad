#include "textfx/app/config.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "textfx/core/error.hpp"

namespace textfx::app {

using nlohmann::json;

void AppConfig::check() const {
  backend.check();
  if (parallelism < 1) fail(ErrorCode::InvalidArgument, "parallelism must be at least 1");
  parse_listen_addr(listen_addr);
}

ListenAddress parse_listen_addr(const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == addr.size())
    fail(ErrorCode::InvalidArgument, "listen address must be host:port, got \"" + addr + "\"");
  ListenAddress out;
  out.host = addr.substr(0, colon);
  try {
    std::size_t used = 0;
    out.port = std::stoi(addr.substr(colon + 1), &used);
    if (used != addr.size() - colon - 1) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    fail(ErrorCode::InvalidArgument, "invalid port in \"" + addr + "\"");
  }
  if (out.port < 0 || out.port > 65535) fail(ErrorCode::InvalidArgument, "port out of range in \"" + addr + "\"");
  return out;
}

textgen::BackendKind parse_backend_kind(const std::string& label) {
  if (label == "mock") return textgen::BackendKind::Mock;
  if (label == "http_chat" || label == "http") return textgen::BackendKind::HttpChat;
  fail(ErrorCode::InvalidArgument, "unknown backend \"" + label + "\" (expected mock or http_chat)");
}

void apply_env_overrides(AppConfig& cfg) {
  if (const char* url = std::getenv("LLM2FX_BASE_URL"); url && *url) cfg.backend.endpoint_url = url;
  if (const char* model = std::getenv("LLM2FX_MODEL"); model && *model) cfg.backend.model_name = model;
}

AppConfig load_config(const std::optional<std::filesystem::path>& path) {
  AppConfig cfg;
  if (path) {
    std::ifstream in(*path, std::ios::binary);
    if (!in) fail(ErrorCode::FileNotFound, "cannot open config " + path->string());
    std::ostringstream ss;
    ss << in.rdbuf();
    const json doc = json::parse(ss.str(), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) fail(ErrorCode::SchemaError, "config is not a JSON object");
    try {
      if (doc.contains("backend")) {
        const auto& b = doc.at("backend");
        if (b.contains("kind")) cfg.backend.kind = parse_backend_kind(b.at("kind").get<std::string>());
        cfg.backend.endpoint_url = b.value("endpoint_url", cfg.backend.endpoint_url);
        cfg.backend.model_name = b.value("model_name", cfg.backend.model_name);
        cfg.backend.api_key_env = b.value("api_key_env", cfg.backend.api_key_env);
        cfg.backend.temperature = b.value("temperature", cfg.backend.temperature);
        cfg.backend.timeout_seconds = b.value("timeout_seconds", cfg.backend.timeout_seconds);
        cfg.backend.max_retries = b.value("max_retries", cfg.backend.max_retries);
        if (b.contains("api_key"))
          fail(ErrorCode::InvalidArgument, "API keys are read from the environment only; remove \"api_key\"");
      }
      cfg.data_dir = doc.value("data_dir", cfg.data_dir.string());
      cfg.seed = doc.value("seed", cfg.seed);
      cfg.parallelism = doc.value("parallelism", cfg.parallelism);
      cfg.listen_addr = doc.value("listen_addr", cfg.listen_addr);
      cfg.transcript_log = doc.value("transcript_log", cfg.transcript_log.string());
    } catch (const json::exception& e) {
      fail(ErrorCode::SchemaError, std::string("malformed config: ") + e.what());
    }
  }
  apply_env_overrides(cfg);
  return cfg;
}

}  // namespace textfx::app
