#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "textfx/fx/params.hpp"

namespace textfx::dataset {

/// One crowdsourced contribution. EQ rows carry 40 graphic-EQ gains in dB;
/// reverb rows carry the 25 reverb values in schema order.
struct RawExample {
  std::string source_id;
  fx::FxType fx = fx::FxType::Eq;
  std::vector<std::string> descriptors;
  std::vector<double> params_native;

  friend bool operator==(const RawExample&, const RawExample&) = default;
};

/// Native parameter count for an effect (40 for EQ, 25 for reverb).
std::size_t native_param_count(fx::FxType fx) noexcept;

struct LoadResult {
  std::vector<RawExample> examples;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;
};

/// CSV with header `source_id,fx_type,descriptors,params`: descriptors are
/// ';'-separated (lowercased, trimmed), params are space-separated numbers.
/// Malformed rows are skipped and counted. Throws SchemaError when the
/// header does not match and FileNotFound for a missing file.
LoadResult parse_socialfx(std::string_view csv);
LoadResult load_socialfx(const std::filesystem::path& path);

/// Loads every *.csv in a directory (sorted by name) or a single file.
LoadResult load_socialfx_tree(const std::filesystem::path& path);

std::string write_socialfx(const std::vector<RawExample>& examples);

}  // namespace textfx::dataset
