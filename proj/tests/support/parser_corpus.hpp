#pragma once

// Prose-wrapping fuzz corpus for the parameter parser. Each case wraps a
// valid object in one of twenty chat-style templates; the expected ParamSet
// is known up front.

#include <cmath>
#include <string>
#include <vector>

#include "textfx/core/random.hpp"
#include "textfx/fx/params.hpp"
#include "textfx/textgen/serialize.hpp"

namespace oracle {

inline const std::vector<std::string>& wrap_templates() {
  static const std::vector<std::string> t = {
      "{OBJ}",
      "Sure! Here are the settings: ```json {OBJ} ``` hope this helps",
      "```json\n{OBJ}\n```",
      "```\n{OBJ}\n```",
      "Here is the configuration you asked for:\n\n{OBJ}",
      "{OBJ}\n\nThese values emphasize the requested character.",
      "Of course. {OBJ} Let me know if you want adjustments.",
      "ANSWER: {OBJ}",
      "Based on the description, I would use the following parameters.\n```json\n{OBJ}\n```\nThe low end is tamed slightly.",
      "   \n\t{OBJ}\n   ",
      "Result:\n> {OBJ}",
      "I recommend this setup (values are approximate):\n{OBJ}\nEnjoy!",
      "<json>{OBJ}</json>",
      "Thinking about the timbre: it should feel natural; here goes.\n{OBJ}",
      "**Parameters**\n\n```JSON\n{OBJ}\n```\n\n**Notes**: tweak to taste.",
      "The answer is {OBJ}.",
      "Response: `{OBJ}`",
      "Step 1: analyse. Step 2: choose values.\nFinal:\n{OBJ}\n-- end --",
      "Here you go :)\n\n{OBJ}\n\n(2 decimal places as requested)",
      "json\n{OBJ}\nDone",
  };
  return t;
}

struct ParserCase {
  std::string text;
  textfx::fx::ParamSet expected;
};

// Random valid set rounded to two decimals so every textual form is exact.
inline textfx::fx::ParamSet random_rounded_params(textfx::fx::FxType fx, textfx::Rng& rng) {
  auto p = textfx::fx::sample_uniform(fx, rng);
  return std::visit(
      [](auto v) -> textfx::fx::ParamSet {
        auto a = v.to_array();
        for (double& x : a) x = std::round(x * 100.0) / 100.0;
        using P = decltype(v);
        return textfx::fx::clamp(P::from_array(a)).params;
      },
      p);
}

// Object renderings an assistant might produce for one set.
inline std::vector<std::string> object_forms(const textfx::fx::ParamSet& p) {
  const auto j = textfx::textgen::to_json(p);
  return {j.dump(4), j.dump(), textfx::textgen::to_python_repr(p), j.begin().value().dump(2)};
}

inline std::vector<ParserCase> parser_fuzz_corpus(std::uint64_t seed, std::size_t sets_per_fx = 5) {
  textfx::Rng rng(seed);
  std::vector<ParserCase> out;
  for (auto fx : {textfx::fx::FxType::Eq, textfx::fx::FxType::Reverb})
    for (std::size_t s = 0; s < sets_per_fx; ++s) {
      const auto p = random_rounded_params(fx, rng);
      for (const auto& obj : object_forms(p))
        for (const auto& tpl : wrap_templates()) {
          std::string text = tpl;
          text.replace(text.find("{OBJ}"), 5, obj);
          out.push_back({std::move(text), p});
        }
    }
  return out;
}

}  // namespace oracle
