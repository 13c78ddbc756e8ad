#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "textfx/core/error.hpp"
#include "textfx/evalkit/render.hpp"

namespace textfx::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// {"error": {"code": "<ErrorCode name>", "message": "..."}}
std::string error_json(std::string_view code, const std::string& message);

/// Entry point of the `textfx` binary. Usage errors (unknown flags, unknown
/// effect labels) return 2 and runtime failures return 1, with the error
/// JSON above on `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Re-synthesizes the dry fixtures recorded in a corpus manifest (instrument,
/// sample rate and frame count per clip).
std::vector<evalkit::Fixture> fixtures_from_manifest(const nlohmann::json& manifest);

/// Reads <dir>/manifest.json; throws MissingCorpus when absent.
nlohmann::json read_manifest(const std::filesystem::path& dir);

/// Flat parameter object (no effect wrapper), 4-space indent, trailing newline.
std::string param_file_text(const fx::ParamSet& p);

}  // namespace textfx::app
