#include "textfx/textgen/prompt.hpp"

#include <cstdio>
#include <string>

#include "textfx/core/error.hpp"
#include "textfx/features/features.hpp"
#include "textfx/textgen/serialize.hpp"

namespace textfx::textgen {
namespace {

constexpr std::string_view kRole =
    "You are an expert audio engineer and music producer specializing in sound design and audio "
    "processing. Your task is to translate descriptive timbre words into specific audio effects "
    "parameters that will achieve the desired sound character. You have deep knowledge of "
    "equalizers and understand how they shape timbre. You MUST respond with ONLY a valid JSON "
    "object.";

constexpr std::string_view kInstrumentList =
    "2. An instrument type such as:\n"
    "   - \"drums\", \"guitar\", \"piano\", \"vocals\", \"strings\", \"brass\"";

std::string format_block(fx::FxType fx) {
  const std::string label(fx::to_string(fx));
  std::string out = "Format:\n{\n    \"" + label + "\": {\n";
  const auto emit = [&](const auto& keys) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      out += "        \"" + std::string(keys[i]) + "\": float";
      out += i + 1 < keys.size() ? ",\n" : "\n";
    }
  };
  if (fx == fx::FxType::Eq) {
    emit(fx::EqParams::keys());
  } else {
    emit(fx::ReverbParams::keys());
  }
  out += "    }\n}";
  return out;
}

std::string reverb_prompt(int sample_rate) {
  std::string s(kRole);
  s += "\n\n# Instruction Format\n"
       "Given a reverb description word or phrase and an instrument type, generate appropriate "
       "parameters for a frequency-dependent reverb that will achieve the requested spatial "
       "character.\n";
  s += "For " + std::to_string(sample_rate) +
       " sample rate audio, Consider the typical reverb needs of the specified instrument when "
       "designing the reverb characteristics.\n\n";
  s += "# Input Format\n"
       "The input will consist of:\n"
       "1. A reverb description such as:\n"
       "   - Single words: \"hall\", \"room\", \"plate\", \"cathedral\", \"chamber\", \"spring\", \"ambient\"\n"
       "   - Combined descriptions: \"warm hall\", \"bright room\", \"dark chamber\", \"short but dense\"\n"
       "   - Spatial descriptions: \"distant\", \"close\", \"intimate\", \"huge\", \"airy\", \"tight\"\n";
  s += kInstrumentList;
  s += "\n\n# Output Format\n"
       "Respond with a JSON object containing precise numerical parameters for the reverb. All "
       "values should be in float format for efficiency. The output will include:\n"
       "- The reverb parameters optimized for the requested spatial character and instrument. All "
       "values should be floating point numbers with 2 decimal places of precision.\n";
  s += format_block(fx::FxType::Reverb);
  return s;
}

std::string eq_prompt(int sample_rate) {
  char range[160];
  std::snprintf(range, sizeof range,
                "- Gains are in dB within [%g, %g], cutoff frequencies in Hz within [%g, %g], and q "
                "values within [%g, %g].\n",
                fx::kMinGainDb, fx::kMaxGainDb, fx::kMinCutoffHz, fx::max_cutoff_hz(sample_rate), fx::kMinQ,
                fx::kMaxQ);
  std::string s(kRole);
  s += "\n\n# Instruction Format\n"
       "Given an EQ description word or phrase and an instrument type, generate appropriate "
       "parameters for a 6-band parametric equalizer (low shelf, four peaking bands, high shelf) "
       "that will achieve the requested tonal character.\n";
  s += "For " + std::to_string(sample_rate) +
       " sample rate audio, Consider the typical EQ needs of the specified instrument when "
       "designing the equalizer characteristics.\n\n";
  s += "# Input Format\n"
       "The input will consist of:\n"
       "1. An EQ description such as:\n"
       "   - Single words: \"warm\", \"bright\", \"harsh\", \"soft\", \"muddy\", \"crisp\", \"thin\"\n"
       "   - Combined descriptions: \"warm and round\", \"bright but smooth\", \"dark vintage\", \"airy top end\"\n"
       "   - Tonal descriptions: \"boomy\", \"nasal\", \"boxy\", \"present\", \"heavy\", \"tinny\"\n";
  s += kInstrumentList;
  s += "\n\n# Output Format\n"
       "Respond with a JSON object containing precise numerical parameters for the equalizer. All "
       "values should be in float format for efficiency. The output will include:\n"
       "- The EQ parameters optimized for the requested tonal character and instrument. All values "
       "should be floating point numbers with 2 decimal places of precision.\n";
  s += range;
  s += format_block(fx::FxType::Eq);
  return s;
}

void append_section(std::string& out, std::string_view section) {
  if (!out.empty()) out += "\n\n";
  out += section;
}

}  // namespace

std::string build_system_prompt(fx::FxType fx, int sample_rate) {
  return fx == fx::FxType::Eq ? eq_prompt(sample_rate) : reverb_prompt(sample_rate);
}

std::string build_context(const ContextConfig& cfg, fx::FxType fx) {
  cfg.check();
  for (const auto& ex : cfg.fewshot)
    if (ex.fx_type() != fx)
      fail(ErrorCode::SchemaMismatch, "few-shot example \"" + ex.timbre_word + " " + ex.instrument +
                                          "\" is " + std::string(fx::to_string(ex.fx_type())) +
                                          ", prompt is " + std::string(fx::to_string(fx)));

  std::string out;
  if (cfg.include_code) append_section(out, "# Signal processing function\n\n" + std::string(code_asset(fx)));
  if (cfg.include_features)
    append_section(out, "# Input audio feature\n\n" + features::serialize_features(*cfg.features));
  if (!cfg.fewshot.empty()) {
    std::string block = "# Incontext examples";
    for (const auto& ex : cfg.fewshot) block += "\n\n" + format_fewshot_block(ex);
    append_section(out, block);
  }
  return out;
}

std::string build_user_query(std::string_view timbre_word, std::string_view instrument, fx::FxType fx,
                             QueryStyle style) {
  if (timbre_word.empty()) fail(ErrorCode::InvalidArgument, "timbre word must not be empty");
  if (instrument.empty()) fail(ErrorCode::InvalidArgument, "instrument must not be empty");
  const std::string label(fx::to_string(fx));
  const std::string tail = " for a " + std::string(timbre_word) + " " + std::string(instrument) + " sound.";
  if (style == QueryStyle::FewShot) return "please design a " + label + " audio effects" + tail;
  return "Please design a " + label + " audio effect" + tail;
}

std::string format_fewshot_block(const FewShotExample& ex) {
  return "QUESTION: " + build_user_query(ex.timbre_word, ex.instrument, ex.fx_type(), QueryStyle::FewShot) +
         "\nANSWER: " + to_python_repr(ex.params);
}

PromptBundle assemble_prompt(const GenerationRequest& req, int sample_rate) {
  req.check();
  PromptBundle bundle;
  bundle.system = build_system_prompt(req.fx_type, sample_rate);
  bundle.user = build_context(req.context, req.fx_type);
  if (!req.context.fewshot.empty()) {
    append_section(bundle.user, "QUESTION: " +
                                    build_user_query(req.timbre_word, req.instrument, req.fx_type,
                                                     QueryStyle::FewShot) +
                                    "\nANSWER: ");
  } else {
    append_section(bundle.user, build_user_query(req.timbre_word, req.instrument, req.fx_type));
  }
  return bundle;
}

}  // namespace textfx::textgen
