#include "textfx/evalkit/report.hpp"

#include <json.hpp>

#include <cstdio>

namespace textfx::evalkit {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

ordered_json bounds_json(const BoundsReport& b) {
  return ordered_json{{"upper_bound", b.upper_bound},
                      {"lower_bound", b.lower_bound},
                      {"delta", b.delta},
                      {"seeds_used", b.seeds_used}};
}

}  // namespace

std::string format_score(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string eval_report_csv(const EvalReport& r) {
  std::string out = "word,instrument,fx_type,method,mmd,trials_ok,trials_failed,clamp_rate\n";
  const std::string fx(fx::to_string(r.fx));
  for (const auto& row : r.rows)
    out += csv_field(row.word) + "," + csv_field(row.instrument) + "," + fx + "," + csv_field(row.method) + "," +
           format_score(row.mmd) + "," + std::to_string(row.trials_ok) + "," + std::to_string(row.trials_failed) +
           "," + format_score(row.clamp_rate) + "\n";
  for (const auto& m : r.macro)
    out += "macro," + csv_field(m.instrument) + "," + fx + "," + csv_field(r.method) + "," + format_score(m.mmd) +
           ",,,\n";
  return out;
}

std::string eval_report_json(const EvalReport& r) {
  ordered_json doc;
  doc["fx_type"] = std::string(fx::to_string(r.fx));
  doc["method"] = r.method;
  doc["rows"] = ordered_json::array();
  for (const auto& row : r.rows)
    doc["rows"].push_back({{"word", row.word},
                           {"instrument", row.instrument},
                           {"mmd", row.mmd},
                           {"trials_ok", row.trials_ok},
                           {"trials_failed", row.trials_failed},
                           {"clamp_rate", row.clamp_rate}});
  doc["macro"] = ordered_json::object();
  for (const auto& m : r.macro) doc["macro"][m.instrument] = m.mmd;
  return doc.dump(2);
}

std::string bounds_report_csv(const BoundsResult& r, const std::string& embedding) {
  std::string out = "embedding,word,instrument,U.B,L.B,\xCE\x94\n";
  const auto line = [&](const std::string& word, const std::string& inst, const BoundsReport& b) {
    out += csv_field(embedding) + "," + csv_field(word) + "," + csv_field(inst) + "," + format_score(b.upper_bound) +
           "," + format_score(b.lower_bound) + "," + format_score(b.delta) + "\n";
  };
  for (const auto& c : r.cells) line(c.word, c.instrument, c.bounds);
  for (const auto& w : r.words) line(w.word, "all", w.bounds);
  line("Avg.", "all", r.macro);
  return out;
}

std::string bounds_report_json(const BoundsResult& r, const std::string& embedding) {
  ordered_json doc;
  doc["embedding"] = embedding;
  doc["fx_type"] = std::string(fx::to_string(r.fx));
  doc["cells"] = ordered_json::array();
  for (const auto& c : r.cells) {
    auto j = bounds_json(c.bounds);
    j["word"] = c.word;
    j["instrument"] = c.instrument;
    doc["cells"].push_back(j);
  }
  doc["words"] = ordered_json::object();
  for (const auto& w : r.words) doc["words"][w.word] = bounds_json(w.bounds);
  doc["macro"] = bounds_json(r.macro);
  doc["avg_delta"] = r.macro.delta;
  return doc.dump(2);
}

}  // namespace textfx::evalkit
