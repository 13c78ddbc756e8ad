#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "textfx/textgen/types.hpp"

namespace textfx::app {

struct AppConfig {
  textgen::BackendConfig backend;
  std::filesystem::path data_dir = "data";
  std::uint64_t seed = 0;
  std::size_t parallelism = 1;
  std::string listen_addr = "127.0.0.1:8080";
  std::filesystem::path transcript_log;  // empty: no audit log

  void check() const;
};

struct ListenAddress {
  std::string host;
  int port = 0;
};

/// "host:port"; throws InvalidArgument otherwise.
ListenAddress parse_listen_addr(const std::string& addr);

/// Defaults, then the JSON file (if given), then LLM2FX_BASE_URL and
/// LLM2FX_MODEL from the environment. The API key is only ever read from
/// the variable named by backend.api_key_env, at request time.
AppConfig load_config(const std::optional<std::filesystem::path>& path = std::nullopt);

void apply_env_overrides(AppConfig& cfg);

textgen::BackendKind parse_backend_kind(const std::string& label);

}  // namespace textfx::app
