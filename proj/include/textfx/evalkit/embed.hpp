#pragma once

#include <array>
#include <span>

#include "textfx/evalkit/mmd.hpp"
#include "textfx/features/features.hpp"

namespace textfx::evalkit {

inline constexpr double kStdFloor = 1e-9;

/// Per-dimension z-scoring fitted on a reference corpus. Uses the population
/// standard deviation, floored at kStdFloor; dimensions at the floor map
/// to 0 for every input.
struct Standardizer {
  using Vec = std::array<double, features::DspFeatures::kDims>;

  Vec mean{};
  Vec std{};

  static Standardizer fit(std::span<const features::DspFeatures> corpus);
  static Standardizer fit(std::span<const Vec> corpus);

  Embedding apply(const features::DspFeatures& f) const;
  Embedding apply(const Vec& v) const;
};

/// Standardized 8-dimensional feature embedding.
inline Embedding embed(const features::DspFeatures& f, const Standardizer& stats) { return stats.apply(f); }

}  // namespace textfx::evalkit
