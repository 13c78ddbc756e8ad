#pragma once

#include <json.hpp>

#include <string>
#include <variant>

#include "textfx/fx/params.hpp"
#include "textfx/textgen/types.hpp"

namespace textfx::textgen {

using ordered_json = nlohmann::ordered_json;

/// {"eq": {...}} or {"reverb": {...}} with keys in schema order.
ordered_json to_json(const fx::ParamSet& p);
ordered_json to_json(const fx::GraphicEqParams& p);

/// Pretty-printed with 4-space indent.
std::string to_pretty_json(const fx::ParamSet& p);

/// Python dict literal as used in few-shot answers, e.g.
/// {'reverb': {'band0_gain': 0.0, ..., 'mix': 0.8}}
std::string to_python_repr(const fx::ParamSet& p);

/// Shortest round-trip decimal for a double, always with a fractional part
/// or exponent (1 -> "1.0", 0.05 -> "0.05").
std::string format_float(double v);

ordered_json to_json(const FewShotExample& ex);
FewShotExample fewshot_from_json(const nlohmann::json& j);

/// Any parameter file accepted by the renderer.
using AnyParams = std::variant<fx::EqParams, fx::ReverbParams, fx::GraphicEqParams>;

/// Detects the schema of a parameter file by its keys. Throws
/// AmbiguousSchema (naming the candidates) when none or several match.
AnyParams detect_param_file(const std::string& text);

}  // namespace textfx::textgen
