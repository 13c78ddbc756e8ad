#pragma once

#include <string>

#include "textfx/evalkit/bounds.hpp"
#include "textfx/evalkit/runner.hpp"

namespace textfx::evalkit {

/// Number with up to 6 significant decimals, fixed notation.
std::string format_score(double v);

/// word,instrument,fx_type,method,mmd,trials_ok,trials_failed,clamp_rate
/// followed by macro rows (word "macro") per instrument and "all".
std::string eval_report_csv(const EvalReport& r);
std::string eval_report_json(const EvalReport& r);

/// Columns: embedding,word,instrument,U.B,L.B,Δ. Per-cell rows, per-word
/// rows (instrument "all"), then an "Avg." row whose Δ is the average Δ.
std::string bounds_report_csv(const BoundsResult& r, const std::string& embedding = "dsp_features");
std::string bounds_report_json(const BoundsResult& r, const std::string& embedding = "dsp_features");

}  // namespace textfx::evalkit
