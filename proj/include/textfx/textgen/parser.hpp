#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "textfx/fx/params.hpp"

namespace textfx::textgen {

struct ParsedParams {
  fx::ParamSet params;
  std::vector<std::string> clamped_fields;
  std::vector<std::string> warnings;  // ignored extra keys
};

/// Rewrites Python-flavoured object text into JSON: single-quoted strings
/// become double-quoted, True/False/None become true/false/null, and
/// trailing commas before a closing bracket are dropped.
std::string normalize_json_like(std::string_view text);

/// First balanced {...} span in `raw` that parses (after normalization) as a
/// JSON object. Quotes of either kind are honoured while matching braces.
std::optional<nlohmann::json> extract_json_object(std::string_view raw);

/// Extracts and validates a parameter object from free-form model output.
/// Accepts a bare parameter map or one nested under "eq"/"reverb".
/// Errors: NoJsonFound, MissingKeys (listing them), WrongEffect.
/// Out-of-range values are clamped and reported, never rejected.
ParsedParams parse_params(std::string_view raw, fx::FxType fx);

}  // namespace textfx::textgen
