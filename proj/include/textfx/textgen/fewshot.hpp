#pragma once

#include <vector>

#include "textfx/fx/params.hpp"
#include "textfx/textgen/types.hpp"

namespace textfx::textgen {

/// The five shipped in-context examples for an effect, in prompt order.
/// Reverb: echo piano, warm piano, distorted guitar, echo guitar, echo drums.
/// EQ: warm guitar, bright piano, muffled drums, harsh guitar, soft piano
/// (authored for this repository).
const std::vector<FewShotExample>& default_fewshot(fx::FxType fx);

}  // namespace textfx::textgen
