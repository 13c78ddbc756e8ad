#include "textfx/textgen/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "textfx/core/error.hpp"

namespace textfx::textgen {
namespace {

using nlohmann::json;

template <typename P>
ordered_json fields_json(const P& p) {
  ordered_json body = ordered_json::object();
  const auto values = p.to_array();
  for (std::size_t i = 0; i < P::kFieldCount; ++i) body[std::string(P::keys()[i])] = values[i];
  return body;
}

template <typename P>
std::string fields_repr(const P& p) {
  std::string out;
  const auto values = p.to_array();
  for (std::size_t i = 0; i < P::kFieldCount; ++i) {
    if (i) out += ", ";
    out += '\'';
    out += P::keys()[i];
    out += "': ";
    out += format_float(values[i]);
  }
  return out;
}

template <typename P>
bool has_all_keys(const json& obj) {
  for (auto k : P::keys())
    if (!obj.contains(std::string(k))) return false;
  return true;
}

double number_at(const json& obj, const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(ErrorCode::InvalidParams, "field \"" + key + "\" is not a number");
  return v.get<double>();
}

template <typename P>
P read_exact(const json& obj) {
  std::array<double, P::kFieldCount> values{};
  for (std::size_t i = 0; i < P::kFieldCount; ++i) values[i] = number_at(obj, std::string(P::keys()[i]));
  return P::from_array(values);
}

fx::GraphicEqParams read_graphic(const json& obj) {
  const auto& arr = obj.at("gains_db");
  fx::GraphicEqParams g;
  for (std::size_t i = 0; i < g.gains_db.size(); ++i) {
    if (!arr[i].is_number()) fail(ErrorCode::InvalidParams, "gains_db[" + std::to_string(i) + "] is not a number");
    g.gains_db[i] = arr[i].get<double>();
  }
  return g;
}

bool is_graphic(const json& obj) {
  auto it = obj.find("gains_db");
  return it != obj.end() && it->is_array() && it->size() == fx::GraphicEqParams::kBands;
}

}  // namespace

ordered_json to_json(const fx::ParamSet& p) {
  ordered_json out = ordered_json::object();
  std::visit(
      [&](const auto& v) { out[std::string(fx::to_string(fx::fx_type_of(p)))] = fields_json(v); }, p);
  return out;
}

ordered_json to_json(const fx::GraphicEqParams& p) {
  ordered_json gains = ordered_json::array();
  for (double g : p.gains_db) gains.push_back(g);
  ordered_json out = ordered_json::object();
  out["graphic_eq"] = ordered_json{{"gains_db", gains}};
  return out;
}

std::string to_pretty_json(const fx::ParamSet& p) { return to_json(p).dump(4); }

std::string to_python_repr(const fx::ParamSet& p) {
  std::string body = std::visit([](const auto& v) { return fields_repr(v); }, p);
  return "{'" + std::string(fx::to_string(fx::fx_type_of(p))) + "': {" + body + "}}";
}

// Mirrors Python's float repr: shortest round-trip digits, positional when
// the decimal exponent lies in [-4, 16), scientific otherwise.
std::string format_float(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  if (v == 0.0) return std::signbit(v) ? "-0.0" : "0.0";

  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
  std::string sci(buf, res.ptr);
  const bool negative = sci[0] == '-';
  if (negative) sci.erase(0, 1);
  const auto epos = sci.find('e');
  const int exp = std::atoi(sci.c_str() + epos + 1);
  std::string digits;
  for (std::size_t i = 0; i < epos; ++i)
    if (sci[i] != '.') digits.push_back(sci[i]);

  std::string out = negative ? "-" : "";
  if (exp >= -4 && exp < 16) {
    if (exp < 0) {
      out += "0." + std::string(static_cast<std::size_t>(-exp - 1), '0') + digits;
    } else {
      const auto int_len = static_cast<std::size_t>(exp) + 1;
      if (digits.size() <= int_len) {
        out += digits + std::string(int_len - digits.size(), '0') + ".0";
      } else {
        out += digits.substr(0, int_len) + "." + digits.substr(int_len);
      }
    }
    return out;
  }
  out += digits.substr(0, 1);
  if (digits.size() > 1) out += "." + digits.substr(1);
  char ebuf[16];
  std::snprintf(ebuf, sizeof ebuf, "e%c%02d", exp < 0 ? '-' : '+', std::abs(exp));
  return out + ebuf;
}

ordered_json to_json(const FewShotExample& ex) {
  ordered_json out = ordered_json::object();
  out["timbre_word"] = ex.timbre_word;
  out["instrument"] = ex.instrument;
  out["fx_type"] = std::string(fx::to_string(ex.fx_type()));
  out["params"] = to_json(ex.params).front();
  return out;
}

FewShotExample fewshot_from_json(const json& j) {
  try {
    FewShotExample ex;
    ex.timbre_word = j.at("timbre_word").get<std::string>();
    ex.instrument = j.at("instrument").get<std::string>();
    const auto fx = fx::parse_fx_type(j.at("fx_type").get<std::string>());
    if (!fx) fail(ErrorCode::SchemaError, "unknown fx_type in few-shot example");
    const auto& params = j.at("params");
    if (*fx == fx::FxType::Eq) {
      ex.params = read_exact<fx::EqParams>(params);
    } else {
      ex.params = read_exact<fx::ReverbParams>(params);
    }
    return ex;
  } catch (const json::exception& e) {
    fail(ErrorCode::SchemaError, std::string("malformed few-shot example: ") + e.what());
  }
}

AnyParams detect_param_file(const std::string& text) {
  const json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object())
    fail(ErrorCode::SchemaError, "parameter file is not a JSON object");

  // A single wrapper key names the schema outright.
  const json* body = &doc;
  std::vector<std::string> hinted;
  for (const char* tag : {"eq", "reverb", "graphic_eq"}) {
    auto it = doc.find(tag);
    if (it != doc.end() && it->is_object()) hinted.emplace_back(tag);
  }
  if (hinted.size() == 1 && doc.size() == 1) body = &doc.at(hinted.front());

  std::vector<std::string> candidates;
  if (has_all_keys<fx::EqParams>(*body)) candidates.emplace_back("eq");
  if (has_all_keys<fx::ReverbParams>(*body)) candidates.emplace_back("reverb");
  if (is_graphic(*body)) candidates.emplace_back("graphic_eq");

  if (candidates.size() != 1) {
    std::string names;
    for (const auto& c : candidates.empty() ? std::vector<std::string>{"eq", "reverb", "graphic_eq"} : candidates)
      names += (names.empty() ? "" : ", ") + c;
    fail(ErrorCode::AmbiguousSchema, (candidates.empty() ? "no parameter schema matches; candidates: "
                                                         : "several parameter schemas match: ") + names);
  }
  if (candidates.front() == "eq") return read_exact<fx::EqParams>(*body);
  if (candidates.front() == "reverb") return read_exact<fx::ReverbParams>(*body);
  return read_graphic(*body);
}

}  // namespace textfx::textgen
