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

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string_view>

#include "chitin/audio_io.hpp"
#include "chitin/dataset.hpp"

namespace chitin {

// Four desk-scale sound archetypes standing in for real insect corpora. The
// band and rate constants are fixture conventions only.
enum class Archetype {
  TonalChirp,      // 4.5 kHz chirps with a small glide, stridulation-like
  BroadbandBuzz,   // 3-8 kHz band-limited noise with wingbeat modulation
  ImpulsiveClick,  // trains of damped 2 kHz clicks, head-banging-like
  LowPulse,        // 1 kHz pulsed tone with a weak second harmonic
};

inline constexpr std::array<Archetype, 4> kArchetypes = {Archetype::TonalChirp, Archetype::BroadbandBuzz,
                                                         Archetype::ImpulsiveClick, Archetype::LowPulse};

std::string_view archetype_name(Archetype a);

/// Chirp carriers stay inside this band for every clip.
inline constexpr double kChirpBandLowHz = 4000.0;
inline constexpr double kChirpBandHighHz = 5000.0;

struct SynthSpec {
  int clips_per_class = 5;
  double clip_duration = 5.0;  // seconds
  std::uint64_t seed = 42;
  double sample_rate = kCanonicalSampleRate;
  double window_seconds = 1.0;
};

void validate(const SynthSpec& spec);

/// One clip, a pure function of (spec.seed, archetype, clip_id).
AudioClip synth_clip(Archetype archetype, int clip_id, const SynthSpec& spec);

/// Writes out_dir/clips/<class>/clip<k>.wav for every archetype and returns
/// the clip-level manifest (instance lists empty; see segment_manifest).
DatasetManifest synth_generate(const SynthSpec& spec, const std::filesystem::path& out_dir);

}  // namespace chitin
