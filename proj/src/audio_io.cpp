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

#include "chitin/audio_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <optional>

#include "chitin/error.hpp"
#include "chitin/fileio.hpp"

namespace chitin {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t le16(const std::uint8_t* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

std::uint32_t le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

bool tag_is(const std::uint8_t* p, const char* tag) { return std::memcmp(p, tag, 4) == 0; }

struct FmtChunk {
  std::uint16_t tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

FmtChunk parse_fmt(const std::uint8_t* p, std::uint32_t size) {
  if (size < 16) throw Error(ErrorCode::MalformedHeader, "fmt chunk shorter than 16 bytes");
  FmtChunk f;
  f.tag = le16(p);
  f.channels = le16(p + 2);
  f.rate = le32(p + 4);
  f.block_align = le16(p + 12);
  f.bits = le16(p + 14);
  if (f.tag == kFormatExtensible) {
    if (size < 40) throw Error(ErrorCode::MalformedHeader, "extensible fmt chunk shorter than 40 bytes");
    // The sub-format GUID starts at offset 24; its first two bytes carry the
    // plain format code.
    f.tag = le16(p + 24);
  }
  return f;
}

SampleFormat classify(const FmtChunk& f) {
  if (f.tag == kFormatPcm && f.bits == 16) return SampleFormat::Pcm16;
  if (f.tag == kFormatPcm && f.bits == 24) return SampleFormat::Pcm24;
  if (f.tag == kFormatFloat && f.bits == 32) return SampleFormat::Float32;
  throw Error(ErrorCode::UnsupportedEncoding,
              "format tag " + std::to_string(f.tag) + " with " + std::to_string(f.bits) + " bits per sample");
}

double decode_sample(const std::uint8_t* p, SampleFormat format) {
  switch (format) {
    case SampleFormat::Pcm16:
      return static_cast<std::int16_t>(le16(p)) / 32768.0;
    case SampleFormat::Pcm24: {
      std::int32_t v = static_cast<std::int32_t>(p[0] | (p[1] << 8) | (p[2] << 16));
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    case SampleFormat::Float32: {
      const float f = std::bit_cast<float>(le32(p));
      if (!std::isfinite(f)) throw Error(ErrorCode::UnsupportedEncoding, "non-finite float sample");
      return static_cast<double>(f);
    }
  }
  return 0.0;
}

}  // namespace

int bits_per_sample(SampleFormat format) {
  switch (format) {
    case SampleFormat::Pcm16: return 16;
    case SampleFormat::Pcm24: return 24;
    case SampleFormat::Float32: return 32;
  }
  return 0;
}

RawWav parse_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || !tag_is(bytes.data(), "RIFF") || !tag_is(bytes.data() + 8, "WAVE")) {
    throw Error(ErrorCode::MalformedHeader, "missing RIFF/WAVE signature");
  }

  std::optional<FmtChunk> fmt;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (tag_is(chunk, "fmt ")) {
      if (body + size > bytes.size()) throw Error(ErrorCode::MalformedHeader, "fmt chunk overruns file");
      fmt = parse_fmt(bytes.data() + body, size);
    } else if (tag_is(chunk, "data")) {
      if (!fmt) throw Error(ErrorCode::MalformedHeader, "data chunk before fmt chunk");
      const SampleFormat format = classify(*fmt);
      if (fmt->channels == 0) throw Error(ErrorCode::MalformedHeader, "zero channels");
      if (fmt->channels > 2) {
        throw Error(ErrorCode::UnsupportedEncoding, std::to_string(fmt->channels) + " channels (max 2)");
      }
      if (fmt->rate == 0) throw Error(ErrorCode::MalformedHeader, "zero sample rate");
      const std::size_t width = static_cast<std::size_t>(bits_per_sample(format) / 8);
      const std::size_t frame_bytes = width * fmt->channels;
      if (body + size > bytes.size()) {
        throw Error(ErrorCode::TruncatedPayload, "data chunk declares " + std::to_string(size) + " bytes, " +
                                                     std::to_string(bytes.size() - body) + " present");
      }
      if (size % frame_bytes != 0) {
        throw Error(ErrorCode::TruncatedPayload, "data size is not a whole number of frames");
      }
      RawWav raw;
      raw.channels = fmt->channels;
      raw.format = format;
      raw.frame_rate = fmt->rate;
      raw.payload.resize(size / width);
      const std::uint8_t* src = bytes.data() + body;
      for (std::size_t i = 0; i < raw.payload.size(); ++i) raw.payload[i] = decode_sample(src + i * width, format);
      return raw;
    }
    pos = body + size + (size & 1u);
  }
  if (!fmt) throw Error(ErrorCode::MalformedHeader, "no fmt chunk");
  throw Error(ErrorCode::TruncatedPayload, "no data chunk");
}

RawWav read_wav(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  try {
    return parse_wav(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + std::string(e.what()));
  }
}

AudioClip to_mono(const RawWav& raw) {
  AudioClip clip;
  clip.sample_rate = static_cast<double>(raw.frame_rate);
  if (raw.channels == 1) {
    clip.samples = raw.payload;
    return clip;
  }
  const std::size_t n = raw.frames();
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int c = 0; c < raw.channels; ++c) sum += raw.payload[i * raw.channels + c];
    clip.samples[i] = sum / raw.channels;
  }
  return clip;
}

AudioClip resample(const AudioClip& clip, double target_rate) {
  if (!(target_rate > 0.0)) throw Error(ErrorCode::InvalidArgument, "target rate must be positive");
  if (target_rate == clip.sample_rate) return clip;

  const std::size_t in_len = clip.samples.size();
  const auto out_len = static_cast<std::size_t>(
      std::llround(static_cast<double>(in_len) * target_rate / clip.sample_rate));

  AudioClip out;
  out.sample_rate = target_rate;
  out.source_path = clip.source_path;
  out.samples.resize(out_len);
  if (in_len == 0) return out;

  const double step = clip.sample_rate / target_rate;
  const std::size_t last = in_len - 1;
  for (std::size_t i = 0; i < out_len; ++i) {
    const double pos = static_cast<double>(i) * step;
    const auto left = static_cast<std::size_t>(pos);
    if (left >= last) {
      out.samples[i] = clip.samples[last];
      continue;
    }
    const double frac = pos - static_cast<double>(left);
    out.samples[i] = clip.samples[left] + frac * (clip.samples[left + 1] - clip.samples[left]);
  }
  return out;
}

std::vector<std::uint8_t> encode_wav16(const AudioClip& clip) {
  const auto rate = static_cast<std::uint32_t>(std::llround(clip.sample_rate));
  const auto data_bytes = static_cast<std::uint32_t>(clip.samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, kFormatPcm);
  put16(out, 1);
  put32(out, rate);
  put32(out, rate * 2);
  put16(out, 2);
  put16(out, 16);
  put_tag(out, "data");
  put32(out, data_bytes);
  for (double s : clip.samples) {
    const double v = std::isfinite(s) ? s : 0.0;
    const double scaled = std::round(std::clamp(v, -1.0, 1.0) * 32768.0);
    const auto q = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
    put16(out, static_cast<std::uint16_t>(q));
  }
  return out;
}

void write_wav(const AudioClip& clip, const std::filesystem::path& path) {
  write_file_atomic(path, encode_wav16(clip));
}

AudioClip load_audio(const std::filesystem::path& path, double target_rate) {
  AudioClip clip = to_mono(read_wav(path));
  if (clip.sample_rate != target_rate) clip = resample(clip, target_rate);
  clip.source_path = path.string();
  return clip;
}

}  // namespace chitin
