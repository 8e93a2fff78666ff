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
#include <span>
#include <string>
#include <vector>

namespace chitin {

inline constexpr double kCanonicalSampleRate = 44100.0;

/// Mono floating-point audio. Samples are nominally in [-1, 1].
struct AudioClip {
  std::vector<double> samples;
  double sample_rate = kCanonicalSampleRate;
  std::string source_path;

  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }

  bool operator==(const AudioClip&) const = default;
};

enum class SampleFormat { Pcm16, Pcm24, Float32 };

int bits_per_sample(SampleFormat format);

/// Decoded contents of a WAV file: interleaved frames scaled to [-1, 1].
struct RawWav {
  int channels = 1;
  SampleFormat format = SampleFormat::Pcm16;
  std::uint32_t frame_rate = 44100;
  std::vector<double> payload;

  std::size_t frames() const { return channels > 0 ? payload.size() / channels : 0; }
};

/// Parses an in-memory RIFF/WAVE image. Accepts PCM 16/24-bit and IEEE float
/// 32-bit (plain or WAVE_FORMAT_EXTENSIBLE), one or two channels. Unknown
/// chunks are skipped.
RawWav parse_wav(std::span<const std::uint8_t> bytes);

RawWav read_wav(const std::filesystem::path& path);

/// Per-frame mean across channels.
AudioClip to_mono(const RawWav& raw);

/// Linear-interpolation resampler. Output length is
/// round(len * target_rate / sample_rate); target == source returns a copy.
AudioClip resample(const AudioClip& clip, double target_rate);

/// Encodes 16-bit PCM mono with a canonical 44-byte header. Samples outside
/// [-1, 1] are clipped; the sample rate is rounded to an integer.
std::vector<std::uint8_t> encode_wav16(const AudioClip& clip);

void write_wav(const AudioClip& clip, const std::filesystem::path& path);

/// read_wav + to_mono + resample to target_rate (skipped when equal).
AudioClip load_audio(const std::filesystem::path& path, double target_rate = kCanonicalSampleRate);

}  // namespace chitin
