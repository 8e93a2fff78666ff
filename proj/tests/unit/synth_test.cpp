// Copyright 2026 The Chitin Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chitin/synth.hpp"
#include "mfcc_oracle.hpp"
#include "test_support.hpp"

namespace chitin {
namespace {

using testing::TempDir;

// Fraction of spectral power between lo and hi, summed over a handful of
// evenly spaced 2048-sample frames.
double band_fraction(const AudioClip& c, double lo, double hi) {
  const std::size_t n = 2048;
  double band = 0.0, total = 0.0;
  for (std::size_t f = 0; f < 12; ++f) {
    const std::size_t start = f * (c.samples.size() - n) / 11;
    std::vector<double> frame(c.samples.begin() + static_cast<std::ptrdiff_t>(start),
                              c.samples.begin() + static_cast<std::ptrdiff_t>(start + n));
    const auto p = oracle::power_dft(frame);
    for (std::size_t k = 1; k < p.size(); ++k) {
      const double hz = static_cast<double>(k) * c.sample_rate / static_cast<double>(n);
      total += p[k];
      if (hz >= lo && hz <= hi) band += p[k];
    }
  }
  return band / total;
}

TEST(Synth, Deterministic) {
  SynthSpec spec;
  spec.clip_duration = 1.5;
  for (Archetype a : kArchetypes) {
    const auto x = synth_clip(a, 2, spec);
    EXPECT_EQ(x, synth_clip(a, 2, spec));
    EXPECT_NE(x.samples, synth_clip(a, 3, spec).samples);
    EXPECT_EQ(x.samples.size(), 66150u);
    for (double v : x.samples) ASSERT_LE(std::abs(v), 1.0);
  }
  auto other = spec;
  other.seed = 43;
  EXPECT_NE(synth_clip(Archetype::TonalChirp, 1, spec).samples, synth_clip(Archetype::TonalChirp, 1, other).samples);
}

TEST(Synth, ChirpEnergyInBand) {
  SynthSpec spec;
  spec.clip_duration = 2.0;
  const auto chirp = synth_clip(Archetype::TonalChirp, 1, spec);
  EXPECT_GT(band_fraction(chirp, kChirpBandLowHz, kChirpBandHighHz), 0.5);
  const auto low = synth_clip(Archetype::LowPulse, 1, spec);
  EXPECT_LT(band_fraction(low, kChirpBandLowHz, kChirpBandHighHz), 0.1);
}

TEST(Synth, GenerateWritesManifest) {
  TempDir dir;
  SynthSpec spec;
  spec.clips_per_class = 2;
  spec.clip_duration = 1.2;
  const auto m = synth_generate(spec, dir.path());
  ASSERT_EQ(m.classes.size(), 4u);
  for (const auto& cls : m.classes) {
    ASSERT_EQ(cls.clips.size(), 2u);
    for (const auto& clip : cls.clips) EXPECT_TRUE(std::filesystem::exists(clip.path));
  }
  EXPECT_EQ(m.classes[0].name, "tonal_chirp");
  const auto a = load_audio(m.classes[1].clips[1].path);
  EXPECT_EQ(a.samples.size(), 52920u);
}

TEST(Synth, RejectsBadSpec) {
  SynthSpec spec;
  spec.clips_per_class = 0;
  EXPECT_CHITIN_ERROR(validate(spec), ErrorCode::InvalidConfig);
  spec = {};
  spec.clip_duration = 0.5;
  EXPECT_CHITIN_ERROR(validate(spec), ErrorCode::InvalidConfig);
}

}  // namespace
}  // namespace chitin
