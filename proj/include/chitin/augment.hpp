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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "chitin/audio_io.hpp"
#include "chitin/dataset.hpp"

namespace chitin {

struct AugmentSpec {
  std::vector<double> speed_factors{0.9, 1.1};
  std::vector<double> pitch_factors{0.9, 1.1};
  std::uint64_t seed = 42;  // unused by the deterministic transforms
};

void validate(const AugmentSpec& spec);

// Both transforms reduce to resampling and give the same samples for the same
// factor. They are kept separate because they model two different recipes:
// playing the audio faster, and relabelling its frame rate.

/// Plays the clip `factor` times faster at the same nominal rate: length
/// round(len / factor), every frequency multiplied by factor.
AudioClip speed_change(const AudioClip& clip, double factor);

/// Declares the samples to run at factor * sample_rate, then resamples back to
/// the original rate. Same length and frequency law as speed_change.
AudioClip pitch_shift(const AudioClip& clip, double factor);

/// "speed0.9" / "pitch1.1".
std::string transform_tag(const std::string& kind, double factor);

/// Transformed copies of one original instance, each fitted to exactly
/// `window` samples: longer outputs are truncated, shorter ones dropped.
/// Ids are "<instance_id>__<tag>".
std::vector<InstanceRecord> augment_instance(const InstanceRecord& original, const AugmentSpec& spec,
                                             std::size_t window);

/// Adds augmented copies of every original instance, written next to their
/// source as <clip dir>/<instance_id>__<tag>.wav unless out_dir is given, in
/// which case they go to out_dir/<class>/clip<k>/. Originals are untouched and
/// every copy keeps its source clip id.
DatasetManifest augment_dataset(const DatasetManifest& manifest, const AugmentSpec& spec, double sample_rate,
                                const std::filesystem::path& out_dir = {});

}  // namespace chitin
