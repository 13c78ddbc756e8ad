#include "textfx/dataset/socialfx.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "textfx/core/error.hpp"
#include "textfx/textgen/serialize.hpp"

namespace textfx::dataset {
namespace {

constexpr std::string_view kHeader = "source_id,fx_type,descriptors,params";

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits one CSV record honouring double-quoted fields.
std::vector<std::string> split_record(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

bool parse_numbers(std::string_view text, std::vector<double>& out) {
  out.clear();
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i == text.size()) break;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), v);
    if (ec != std::errc() || !std::isfinite(v)) return false;
    i = static_cast<std::size_t>(ptr - text.data());
    if (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) return false;
    out.push_back(v);
  }
  return true;
}

std::vector<std::string> parse_descriptors(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find(';', start), text.size());
    std::string word(trim(text.substr(start, end - start)));
    std::transform(word.begin(), word.end(), word.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (!word.empty() && std::find(out.begin(), out.end(), word) == out.end()) out.push_back(std::move(word));
    start = end + 1;
  }
  return out;
}

}  // namespace

std::size_t native_param_count(fx::FxType fx) noexcept {
  return fx == fx::FxType::Eq ? fx::GraphicEqParams::kBands : fx::ReverbParams::kFieldCount;
}

LoadResult parse_socialfx(std::string_view csv) {
  LoadResult out;
  std::istringstream in{std::string(csv)};
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (!header_seen) {
      std::string header(trim(line));
      if (header.rfind("\xEF\xBB\xBF", 0) == 0) header.erase(0, 3);
      if (header != kHeader)
        fail(ErrorCode::SchemaError, "unexpected header \"" + header + "\"; expected \"" + std::string(kHeader) + "\"");
      header_seen = true;
      continue;
    }
    const auto fields = split_record(line);
    const auto skip = [&](const std::string& why) {
      ++out.skipped;
      out.warnings.push_back("line " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() != 4) {
      skip("expected 4 columns, found " + std::to_string(fields.size()));
      continue;
    }
    RawExample ex;
    ex.source_id = std::string(trim(fields[0]));
    const auto fx = fx::parse_fx_type(trim(fields[1]));
    if (!fx) {
      skip("unknown fx_type \"" + fields[1] + "\"");
      continue;
    }
    ex.fx = *fx;
    ex.descriptors = parse_descriptors(fields[2]);
    if (ex.descriptors.empty()) {
      skip("no descriptors");
      continue;
    }
    if (!parse_numbers(fields[3], ex.params_native)) {
      skip("non-numeric parameter");
      continue;
    }
    if (ex.params_native.size() != native_param_count(ex.fx)) {
      skip(std::to_string(ex.params_native.size()) + " parameters, expected " +
           std::to_string(native_param_count(ex.fx)));
      continue;
    }
    out.examples.push_back(std::move(ex));
  }
  if (!header_seen) out.warnings.emplace_back("empty input: no header and no rows");
  return out;
}

LoadResult load_socialfx(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::FileNotFound, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_socialfx(ss.str());
}

LoadResult load_socialfx_tree(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  if (!fs::exists(path)) fail(ErrorCode::FileNotFound, "no such file or directory: " + path.string());
  if (!fs::is_directory(path)) return load_socialfx(path);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path))
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  LoadResult all;
  for (const auto& f : files) {
    auto part = load_socialfx(f);
    all.skipped += part.skipped;
    for (auto& w : part.warnings) all.warnings.push_back(f.filename().string() + ": " + w);
    for (auto& e : part.examples) all.examples.push_back(std::move(e));
  }
  return all;
}

std::string write_socialfx(const std::vector<RawExample>& examples) {
  std::string out(kHeader);
  out += '\n';
  for (const auto& ex : examples) {
    out += ex.source_id + "," + std::string(fx::to_string(ex.fx)) + ",";
    for (std::size_t i = 0; i < ex.descriptors.size(); ++i) out += (i ? ";" : "") + ex.descriptors[i];
    out += ",";
    for (std::size_t i = 0; i < ex.params_native.size(); ++i)
      out += (i ? " " : "") + textgen::format_float(ex.params_native[i]);
    out += '\n';
  }
  return out;
}

}  // namespace textfx::dataset
