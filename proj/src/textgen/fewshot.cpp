#include "textfx/textgen/fewshot.hpp"

namespace textfx::textgen {
namespace {

FewShotExample reverb(const char* word, const char* instrument,
                      const std::array<double, fx::ReverbParams::kFieldCount>& v) {
  return {word, instrument, fx::ReverbParams::from_array(v)};
}

FewShotExample eq(const char* word, const char* instrument,
                  const std::array<double, fx::EqParams::kFieldCount>& v) {
  return {word, instrument, fx::EqParams::from_array(v)};
}

}  // namespace

const std::vector<FewShotExample>& default_fewshot(fx::FxType fx) {
  // Field order: band0..11 gain, band0..11 decay, mix.
  static const std::vector<FewShotExample> reverb_examples = {
      reverb("echo", "piano",
             {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
              0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.8}),
      reverb("warm", "piano",
             {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6,
              1.2, 1.8, 2.5, 3.5, 4.5, 6.0, 7.5, 9.5, 11.5, 14.0, 16.5, 19.5, 0.8}),
      reverb("distorted", "guitar",
             {0.05, 0.1, 0.15, 0.2, 0.25, 0.2, 0.15, 0.1, 0.05, 0.02, 0.01, 0.0,
              1.0, 0.8, 0.6, 0.4, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001, 0.8}),
      reverb("echo", "guitar",
             {0.0, 0.1, 0.2, 0.3, 0.3, 0.2, 0.1, 0.05, 0.02, 0.01, 0.01, 0.01,
              0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 0.7}),
      reverb("echo", "drums",
             {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 1.0, 1.0, 0.5,
              0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.7, 0.9, 0.9, 0.7, 0.8}),
  };

  // Field order per band: gain_db, cutoff_freq, q; low shelf, band1..4, high shelf.
  static const std::vector<FewShotExample> eq_examples = {
      eq("warm", "guitar",
         {3.0, 150.0, 0.71, 2.5, 300.0, 1.0, 1.0, 700.0, 1.2, -2.0, 2500.0, 1.5, -3.0, 5000.0, 1.0,
          -4.0, 8000.0, 0.71}),
      eq("bright", "piano",
         {-2.0, 120.0, 0.71, -1.0, 250.0, 1.0, 0.0, 800.0, 1.0, 2.5, 3000.0, 1.2, 3.5, 6000.0, 1.0,
          5.0, 9000.0, 0.71}),
      eq("muffled", "drums",
         {2.0, 100.0, 0.71, 3.0, 250.0, 0.9, 1.0, 500.0, 1.0, -4.0, 2000.0, 1.0, -6.0, 4000.0, 0.8,
          -9.0, 6000.0, 0.71}),
      eq("harsh", "guitar",
         {-3.0, 120.0, 0.71, -2.0, 350.0, 1.0, 1.5, 1200.0, 1.4, 5.0, 2800.0, 2.0, 4.0, 4500.0, 1.8,
          2.0, 8000.0, 0.71}),
      eq("soft", "piano",
         {1.0, 150.0, 0.71, 1.5, 400.0, 0.8, -1.0, 1000.0, 1.0, -2.5, 2500.0, 1.0, -3.0, 5000.0, 0.9,
          -4.5, 10000.0, 0.71}),
  };
  return fx == fx::FxType::Eq ? eq_examples : reverb_examples;
}

}  // namespace textfx::textgen
