#pragma once

#include <memory>
#include <string>

#include "textfx/app/config.hpp"
#include "textfx/textgen/backend.hpp"

namespace textfx::app {

/// HTTP status for an error code: 502 for backend failures, 404 for unknown
/// fixtures, 400 otherwise.
int http_status(ErrorCode code) noexcept;

/// JSON service over the generation, rendering and feature modules.
///
///   GET  /api/health               {"status": "ok"}
///   GET  /api/fixtures             dry clip list
///   GET  /api/fixtures/<name>.wav  dry clip (float WAV)
///   POST /api/features             WAV body or multipart "audio" -> features
///   POST /api/render               multipart audio|fixture, params, seed -> WAV
///   POST /api/generate             JSON request -> params and transcript id
///
/// Handlers hold no per-request state; only the transcript log is shared.
class Server {
 public:
  explicit Server(AppConfig cfg, textgen::MockConfig mock = {});
  /// Uses `llm` instead of building a backend from the config.
  Server(AppConfig cfg, std::shared_ptr<textgen::LlmBackend> llm);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds without serving; port 0 picks a free port. Returns the port.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  void listen();
  void stop();
  /// Blocks until the server accepts connections.
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace textfx::app
