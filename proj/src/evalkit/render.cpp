#include "textfx/evalkit/render.hpp"

#include <cstring>

#include "textfx/fixtures/dry_fixtures.hpp"
#include "textfx/fx/eq.hpp"
#include "textfx/fx/reverb.hpp"

namespace textfx::evalkit {
namespace {

template <std::size_t N>
void append_bits(std::string& key, const std::array<double, N>& values) {
  const auto* bytes = reinterpret_cast<const char*>(values.data());
  key.append(bytes, N * sizeof(double));
}

std::string cache_key(const Fixture& fixture, const AnyParams& params, std::uint64_t seed) {
  std::string key = fixture.instrument;
  key.push_back('\0');
  key += std::to_string(fixture.audio.sample_rate()) + ":" + std::to_string(fixture.audio.frames());
  key.push_back(static_cast<char>('0' + params.index()));
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, fx::GraphicEqParams>) {
          append_bits(key, p.gains_db);
        } else {
          append_bits(key, p.to_array());
        }
      },
      params);
  key.append(reinterpret_cast<const char*>(&seed), sizeof seed);
  return key;
}

}  // namespace

AnyParams to_any(const fx::ParamSet& p) {
  return std::visit([](const auto& v) -> AnyParams { return v; }, p);
}

AudioBuffer render(const AudioBuffer& dry, const AnyParams& params, std::uint64_t seed) {
  return std::visit(
      [&](const auto& p) -> AudioBuffer {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, fx::EqParams>) {
          return fx::apply_eq(dry, p);
        } else if constexpr (std::is_same_v<P, fx::GraphicEqParams>) {
          return fx::apply_graphic_eq(dry, p);
        } else {
          return fx::apply_reverb(dry, p, seed).audio;
        }
      },
      params);
}

features::DspFeatures render_features(const AudioBuffer& dry, const AnyParams& params, std::uint64_t seed) {
  return features::extract_features(render(dry, params, seed), {.allow_silent = true});
}

features::DspFeatures RenderCache::features(const Fixture& fixture, const AnyParams& params, std::uint64_t seed) {
  const std::string key = cache_key(fixture, params, seed);
  {
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) {
      ++hits_;
      return it->second;
    }
  }
  ++misses_;
  auto f = render_features(fixture.audio, params, seed);
  std::lock_guard lock(mutex_);
  entries_.emplace(key, f);
  return f;
}

std::vector<Fixture> synthesized_fixtures(double seconds, int sample_rate) {
  std::vector<Fixture> out;
  for (auto inst : fixtures::kAllInstruments)
    out.push_back({std::string(fixtures::to_string(inst)), fixtures::synthesize_dry(inst, sample_rate, seconds)});
  return out;
}

void RenderCache::insert(const Fixture& fixture, const AnyParams& params, std::uint64_t seed,
                         const features::DspFeatures& f) {
  std::lock_guard lock(mutex_);
  entries_.insert_or_assign(cache_key(fixture, params, seed), f);
}

const WordReference* Reference::find(const std::string& word) const {
  for (const auto& w : words)
    if (w.word == word) return &w;
  return nullptr;
}

}  // namespace textfx::evalkit
