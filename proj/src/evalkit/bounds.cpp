#include "textfx/evalkit/bounds.hpp"

#include <algorithm>

#include "textfx/core/error.hpp"
#include "textfx/core/parallel.hpp"
#include "textfx/core/random.hpp"

namespace textfx::evalkit {
namespace {

struct RenderTask {
  std::size_t fixture;
  std::size_t word;
  std::size_t set;
};

BoundsReport mean_report(const std::vector<BoundsReport>& parts) {
  BoundsReport r;
  if (parts.empty()) return r;
  for (const auto& p : parts) {
    r.upper_bound += p.upper_bound;
    r.lower_bound += p.lower_bound;
    r.seeds_used = std::max(r.seeds_used, p.seeds_used);
  }
  r.upper_bound /= static_cast<double>(parts.size());
  r.lower_bound /= static_cast<double>(parts.size());
  r.delta = r.upper_bound - r.lower_bound;
  return r;
}

}  // namespace

ReferenceEmbeddings embed_reference(const Reference& ref, const std::vector<Fixture>& fixtures,
                                    std::uint64_t render_seed, RenderCache& cache, std::size_t parallelism) {
  std::vector<RenderTask> tasks;
  for (std::size_t f = 0; f < fixtures.size(); ++f)
    for (std::size_t w = 0; w < ref.words.size(); ++w)
      for (std::size_t s = 0; s < ref.words[w].render_sets.size(); ++s) tasks.push_back({f, w, s});

  const auto feats = parallel_map<features::DspFeatures>(tasks.size(), parallelism, [&](std::size_t i) {
    const auto& t = tasks[i];
    return cache.features(fixtures[t.fixture], ref.words[t.word].render_sets[t.set], render_seed);
  });

  ReferenceEmbeddings out;
  std::size_t i = 0;
  for (const auto& fixture : fixtures) {
    const std::size_t begin = i;
    for (const auto& w : ref.words) i += w.render_sets.size();
    const std::span<const features::DspFeatures> slice(feats.data() + begin, i - begin);
    if (slice.empty()) continue;
    const auto stats = Standardizer::fit(slice);
    out.stats[fixture.instrument] = stats;
    std::size_t j = 0;
    for (const auto& w : ref.words) {
      auto& cell = out.cells[{w.word, fixture.instrument}];
      for (std::size_t s = 0; s < w.render_sets.size(); ++s) cell.push_back(stats.apply(slice[j++]));
    }
  }
  return out;
}

fx::ParamSet random_baseline_params(fx::FxType fx, std::uint64_t seed, std::size_t seed_index, std::size_t k,
                                    int sample_rate) {
  Rng rng(derive_seed(derive_seed(derive_seed(seed, "random-baseline"), seed_index), k));
  return fx::sample_uniform(fx, rng, sample_rate);
}

double split_half_mmd(const std::vector<Embedding>& set, std::uint64_t seed, const KernelConfig& kernel) {
  std::vector<std::size_t> order(set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  shuffle(order.begin(), order.end(), rng);
  const std::size_t half = set.size() / 2;
  std::vector<Embedding> a, b;
  for (std::size_t i = 0; i < order.size(); ++i) (i < half ? a : b).push_back(set[order[i]]);
  return mmd(a, b, kernel).score;
}

BoundsResult compute_bounds(const Reference& ref, const std::vector<Fixture>& fixtures, const BoundsConfig& cfg,
                            RenderCache* cache) {
  if (cfg.seeds == 0) fail(ErrorCode::InvalidArgument, "bounds need at least one seed");
  std::size_t max_sets = 0;
  for (const auto& w : ref.words) {
    if (w.render_sets.size() < kMinReferenceSets)
      fail(ErrorCode::TooFewSets, "word \"" + w.word + "\" has " + std::to_string(w.render_sets.size()) +
                                      " parameter sets; at least " + std::to_string(kMinReferenceSets) +
                                      " are needed");
    max_sets = std::max(max_sets, cfg.random_count.value_or(w.render_sets.size()));
  }
  if (cfg.random_count && *cfg.random_count < 2) fail(ErrorCode::InvalidArgument, "random_count must be at least 2");

  RenderCache local;
  RenderCache& rc = cache ? *cache : local;
  const auto refs = embed_reference(ref, fixtures, cfg.render_seed, rc, cfg.parallelism);

  // Random-baseline pool per (fixture, seed), long enough for the largest word.
  std::vector<std::vector<std::vector<Embedding>>> pool(fixtures.size(),
                                                        std::vector<std::vector<Embedding>>(cfg.seeds));
  {
    const std::size_t per_fixture = cfg.seeds * max_sets;
    const auto feats = parallel_map<features::DspFeatures>(
        fixtures.size() * per_fixture, cfg.parallelism, [&](std::size_t i) {
          const std::size_t f = i / per_fixture;
          const std::size_t s = (i % per_fixture) / max_sets;
          const std::size_t k = i % max_sets;
          const auto p = random_baseline_params(ref.fx, cfg.seed, s, k, fixtures[f].audio.sample_rate());
          return rc.features(fixtures[f], to_any(p), cfg.render_seed);
        });
    for (std::size_t i = 0; i < feats.size(); ++i) {
      const std::size_t f = i / per_fixture;
      const std::size_t s = (i % per_fixture) / max_sets;
      pool[f][s].push_back(refs.stats.at(fixtures[f].instrument).apply(feats[i]));
    }
  }

  BoundsResult result;
  result.fx = ref.fx;
  for (const auto& w : ref.words) {
    std::vector<BoundsReport> per_instrument;
    for (std::size_t f = 0; f < fixtures.size(); ++f) {
      const auto& cell = refs.cells.at({w.word, fixtures[f].instrument});
      std::vector<BoundsReport> per_seed;
      for (std::size_t s = 0; s < cfg.seeds; ++s) {
        BoundsReport r;
        const auto split_seed = derive_seed(derive_seed(derive_seed(cfg.seed, "upper"), w.word + "/" + fixtures[f].instrument), s);
        r.upper_bound = split_half_mmd(cell, split_seed, cfg.kernel);
        const std::vector<Embedding> random(pool[f][s].begin(),
                                            pool[f][s].begin() + static_cast<std::ptrdiff_t>(cfg.random_count.value_or(cell.size())));
        r.lower_bound = mmd(cell, random, cfg.kernel).score;
        r.seeds_used = 1;
        per_seed.push_back(r);
      }
      BoundsReport cell_report = mean_report(per_seed);
      cell_report.seeds_used = cfg.seeds;
      result.cells.push_back({w.word, fixtures[f].instrument, cell_report});
      per_instrument.push_back(cell_report);
    }
    result.words.push_back({w.word, mean_report(per_instrument)});
  }
  std::vector<BoundsReport> word_reports;
  for (const auto& w : result.words) word_reports.push_back(w.bounds);
  result.macro = mean_report(word_reports);
  return result;
}

}  // namespace textfx::evalkit
