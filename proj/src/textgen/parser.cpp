#include "textfx/textgen/parser.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <string>

#include "textfx/core/error.hpp"

namespace textfx::textgen {
namespace {

using nlohmann::json;

// Caps the work spent on adversarial input with many unbalanced braces.
constexpr std::size_t kMaxCandidates = 64;

bool is_ident(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

// End index (inclusive) of the balanced object starting at text[start] == '{',
// or npos when the braces never balance.
std::size_t match_braces(std::string_view text, std::size_t start) {
  int depth = 0;
  char quote = 0;
  for (std::size_t i = start; i < text.size(); ++i) {
    const char c = text[i];
    if (quote) {
      if (c == '\\') {
        ++i;
      } else if (c == quote) {
        quote = 0;
      }
      continue;
    }
    if (c == '"' || c == '\'') {
      // An apostrophe inside a word ("don't") is not a string delimiter.
      if (c == '\'' && i > 0 && is_ident(text[i - 1]) && i + 1 < text.size() && is_ident(text[i + 1]))
        continue;
      quote = c;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i;
    }
  }
  return std::string_view::npos;
}

std::optional<double> as_number(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    double out = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first < last && *first == ' ') ++first;
    if (first < last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec == std::errc() && ptr == last) return out;
  }
  return std::nullopt;
}

template <typename P>
std::size_t count_keys(const json& obj) {
  std::size_t n = 0;
  for (auto key : P::keys())
    if (obj.contains(std::string(key))) ++n;
  return n;
}

template <typename P>
P read_fields(const json& obj, std::vector<std::string>& warnings) {
  std::array<double, P::kFieldCount> values{};
  std::vector<std::string> missing;
  for (std::size_t i = 0; i < P::kFieldCount; ++i) {
    const std::string key(P::keys()[i]);
    auto it = obj.find(key);
    if (it == obj.end()) {
      missing.push_back(key);
      continue;
    }
    auto v = as_number(*it);
    if (!v) {
      missing.push_back(key + " (not a number)");
      continue;
    }
    values[i] = *v;
  }
  if (!missing.empty()) {
    std::string msg = "missing keys:";
    for (const auto& m : missing) msg += " " + m;
    fail(ErrorCode::MissingKeys, msg);
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const auto& keys = P::keys();
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
      warnings.push_back("ignored extra key \"" + it.key() + "\"");
  }
  return P::from_array(values);
}

}  // namespace

std::string normalize_json_like(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 8);
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '"') {
      // Copy a double-quoted string verbatim.
      out.push_back(c);
      ++i;
      while (i < text.size()) {
        const char d = text[i++];
        out.push_back(d);
        if (d == '\\' && i < text.size()) {
          out.push_back(text[i++]);
        } else if (d == '"') {
          break;
        }
      }
      continue;
    }
    if (c == '\'') {
      // Re-quote a single-quoted string, escaping embedded double quotes.
      out.push_back('"');
      ++i;
      while (i < text.size()) {
        const char d = text[i++];
        if (d == '\\' && i < text.size()) {
          const char e = text[i++];
          if (e == '\'') {
            out.push_back('\'');
          } else {
            out.push_back('\\');
            out.push_back(e);
          }
        } else if (d == '\'') {
          break;
        } else if (d == '"') {
          out += "\\\"";
        } else {
          out.push_back(d);
        }
      }
      out.push_back('"');
      continue;
    }
    if (c == ',') {
      std::size_t j = i + 1;
      while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
      if (j < text.size() && (text[j] == '}' || text[j] == ']')) {
        ++i;
        continue;
      }
    }
    if (std::isalpha(static_cast<unsigned char>(c)) && (i == 0 || !is_ident(text[i - 1]))) {
      std::size_t j = i;
      while (j < text.size() && is_ident(text[j])) ++j;
      const std::string_view word = text.substr(i, j - i);
      if (word == "True") out += "true";
      else if (word == "False") out += "false";
      else if (word == "None") out += "null";
      else out.append(word);
      i = j;
      continue;
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

std::optional<json> extract_json_object(std::string_view raw) {
  std::size_t tried = 0;
  for (std::size_t pos = raw.find('{'); pos != std::string_view::npos && tried < kMaxCandidates;
       pos = raw.find('{', pos + 1)) {
    const std::size_t end = match_braces(raw, pos);
    if (end == std::string_view::npos) continue;
    ++tried;
    const std::string candidate = normalize_json_like(raw.substr(pos, end - pos + 1));
    json parsed = json::parse(candidate, nullptr, /*allow_exceptions=*/false);
    if (!parsed.is_discarded() && parsed.is_object()) return parsed;
  }
  return std::nullopt;
}

ParsedParams parse_params(std::string_view raw, fx::FxType fx) {
  auto obj = extract_json_object(raw);
  if (!obj) fail(ErrorCode::NoJsonFound, "no JSON object found in model output");

  const std::string own = std::string(fx::to_string(fx));
  const std::string other = fx == fx::FxType::Eq ? "reverb" : "eq";

  const json* body = &*obj;
  if (auto it = obj->find(own); it != obj->end() && it->is_object()) {
    body = &*it;
  } else if (auto ot = obj->find(other); ot != obj->end() && ot->is_object()) {
    fail(ErrorCode::WrongEffect, "expected " + own + " parameters, got an object keyed \"" + other + "\"");
  }

  const std::size_t own_hits = fx == fx::FxType::Eq ? count_keys<fx::EqParams>(*body)
                                                    : count_keys<fx::ReverbParams>(*body);
  const std::size_t other_hits = fx == fx::FxType::Eq ? count_keys<fx::ReverbParams>(*body)
                                                      : count_keys<fx::EqParams>(*body);
  if (own_hits == 0 && other_hits > 0)
    fail(ErrorCode::WrongEffect, "object keys match " + other + " parameters, expected " + own);

  ParsedParams out;
  if (fx == fx::FxType::Eq) {
    auto c = fx::clamp(read_fields<fx::EqParams>(*body, out.warnings));
    out.params = c.params;
    out.clamped_fields = std::move(c.fields);
  } else {
    auto c = fx::clamp(read_fields<fx::ReverbParams>(*body, out.warnings));
    out.params = c.params;
    out.clamped_fields = std::move(c.fields);
  }
  return out;
}

}  // namespace textfx::textgen
