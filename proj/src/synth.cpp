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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "chitin/error.hpp"
#include "chitin/parallel.hpp"
#include "chitin/random.hpp"

namespace chitin {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// RBJ band-pass biquad (0 dB peak gain), direct form I.
class BandPass {
 public:
  BandPass(double center_hz, double q, double sample_rate) {
    const double w0 = kTwoPi * center_hz / sample_rate;
    const double alpha = std::sin(w0) / (2.0 * q);
    const double a0 = 1.0 + alpha;
    b0_ = alpha / a0;
    b2_ = -alpha / a0;
    a1_ = -2.0 * std::cos(w0) / a0;
    a2_ = (1.0 - alpha) / a0;
  }

  double operator()(double x) {
    const double y = b0_ * x + b2_ * x2_ - a1_ * y1_ - a2_ * y2_;
    x2_ = x1_;
    x1_ = x;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  double b0_, b2_, a1_, a2_;
  double x1_ = 0, x2_ = 0, y1_ = 0, y2_ = 0;
};

double rms(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return v.empty() ? 0.0 : std::sqrt(s / static_cast<double>(v.size()));
}

void scale_to_rms(std::vector<double>& v, double target) {
  const double r = rms(v);
  if (r <= 0.0) return;
  for (double& x : v) x *= target / r;
}

// Hann bump of the given length placed at onset (both in samples).
double hann_env(double pos, double length) {
  if (pos < 0.0 || pos >= length) return 0.0;
  return 0.5 - 0.5 * std::cos(kTwoPi * pos / length);
}

void tonal_chirp(std::vector<double>& out, double sr, Rng& rng) {
  const double f0 = rng.uniform(4300.0, 4700.0);
  const double glide = rng.uniform(60.0, 150.0);
  const double rate = rng.uniform(5.0, 9.0);
  const double chirp_len = rng.uniform(0.03, 0.05) * sr;
  const double period = sr / rate;
  for (double onset = rng.uniform(0.0, period); onset < static_cast<double>(out.size());
       onset += period * rng.uniform(0.9, 1.1)) {
    const auto start = static_cast<std::size_t>(onset);
    const auto len = static_cast<std::size_t>(chirp_len);
    double phase = rng.uniform(0.0, kTwoPi);
    for (std::size_t k = 0; k < len && start + k < out.size(); ++k) {
      const double frac = static_cast<double>(k) / chirp_len;
      const double f = f0 - glide + 2.0 * glide * frac;
      phase += kTwoPi * f / sr;
      out[start + k] += hann_env(static_cast<double>(k), chirp_len) * std::sin(phase);
    }
  }
}

void broadband_buzz(std::vector<double>& out, double sr, Rng& rng) {
  BandPass first(rng.uniform(5000.0, 6000.0), rng.uniform(0.7, 1.0), sr);
  BandPass second(rng.uniform(5000.0, 6000.0), rng.uniform(0.7, 1.0), sr);
  const double wingbeat = rng.uniform(120.0, 220.0);
  const double depth = rng.uniform(0.4, 0.7);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double t = static_cast<double>(i) / sr;
    out[i] = second(first(rng.normal())) * (1.0 + depth * std::sin(kTwoPi * wingbeat * t));
  }
}

void impulsive_click(std::vector<double>& out, double sr, Rng& rng) {
  const double ring = rng.uniform(1800.0, 2400.0);
  const double tau = rng.uniform(0.0015, 0.003) * sr;
  const double rate = rng.uniform(12.0, 20.0);
  const double period = sr / rate;
  const auto len = static_cast<std::size_t>(0.015 * sr);
  for (double onset = rng.uniform(0.0, period); onset < static_cast<double>(out.size());
       onset += period * rng.uniform(0.7, 1.3)) {
    const auto start = static_cast<std::size_t>(onset);
    const double amp = rng.uniform(0.6, 1.0);
    for (std::size_t k = 0; k < len && start + k < out.size(); ++k) {
      const double kk = static_cast<double>(k);
      out[start + k] += amp * std::exp(-kk / tau) * std::sin(kTwoPi * ring * kk / sr);
    }
  }
}

void low_pulse(std::vector<double>& out, double sr, Rng& rng) {
  const double f = rng.uniform(900.0, 1100.0);
  const double rate = rng.uniform(3.0, 5.0);
  const double pulse_len = rng.uniform(0.08, 0.15) * sr;
  const double ramp = 0.01 * sr;
  const double period = sr / rate;
  for (double onset = rng.uniform(0.0, period); onset < static_cast<double>(out.size());
       onset += period * rng.uniform(0.9, 1.1)) {
    const auto start = static_cast<std::size_t>(onset);
    const auto len = static_cast<std::size_t>(pulse_len);
    for (std::size_t k = 0; k < len && start + k < out.size(); ++k) {
      const double kk = static_cast<double>(k);
      const double env = std::min({1.0, kk / ramp, (pulse_len - kk) / ramp});
      const double t = static_cast<double>(start + k) / sr;
      out[start + k] += env * (std::sin(kTwoPi * f * t) + 0.3 * std::sin(kTwoPi * 2.0 * f * t));
    }
  }
}

}  // namespace

std::string_view archetype_name(Archetype a) {
  switch (a) {
    case Archetype::TonalChirp: return "tonal_chirp";
    case Archetype::BroadbandBuzz: return "broadband_buzz";
    case Archetype::ImpulsiveClick: return "impulsive_click";
    case Archetype::LowPulse: return "low_pulse";
  }
  return "unknown";
}

void validate(const SynthSpec& spec) {
  if (spec.clips_per_class < 1) throw Error(ErrorCode::InvalidConfig, "clips_per_class must be >= 1");
  if (!(spec.sample_rate > 0.0)) throw Error(ErrorCode::InvalidConfig, "sample_rate must be positive");
  if (!(spec.window_seconds > 0.0)) throw Error(ErrorCode::InvalidConfig, "window_seconds must be positive");
  if (!(spec.clip_duration >= spec.window_seconds)) {
    throw Error(ErrorCode::InvalidConfig, "clip_duration must be at least one window");
  }
}

AudioClip synth_clip(Archetype archetype, int clip_id, const SynthSpec& spec) {
  validate(spec);
  Rng rng(derive_seed(spec.seed, {static_cast<std::uint64_t>(archetype), static_cast<std::uint64_t>(clip_id)}));
  const double sr = spec.sample_rate;

  AudioClip clip;
  clip.sample_rate = sr;
  clip.samples.assign(static_cast<std::size_t>(std::llround(spec.clip_duration * sr)), 0.0);

  switch (archetype) {
    case Archetype::TonalChirp: tonal_chirp(clip.samples, sr, rng); break;
    case Archetype::BroadbandBuzz: broadband_buzz(clip.samples, sr, rng); break;
    case Archetype::ImpulsiveClick: impulsive_click(clip.samples, sr, rng); break;
    case Archetype::LowPulse: low_pulse(clip.samples, sr, rng); break;
  }
  scale_to_rms(clip.samples, rng.uniform(0.08, 0.15));

  const double noise_floor = rng.uniform(0.002, 0.006);
  for (double& x : clip.samples) x = std::clamp(x + noise_floor * rng.normal(), -1.0, 1.0);
  return clip;
}

DatasetManifest synth_generate(const SynthSpec& spec, const std::filesystem::path& out_dir) {
  validate(spec);
  const auto root = std::filesystem::absolute(out_dir).lexically_normal();

  DatasetManifest m;
  m.window_seconds = spec.window_seconds;
  for (Archetype a : kArchetypes) {
    ClassEntry cls;
    cls.name = std::string(archetype_name(a));
    for (int k = 1; k <= spec.clips_per_class; ++k) {
      ClipEntry clip;
      clip.clip_id = k;
      clip.path = root / "clips" / cls.name / ("clip" + std::to_string(k) + ".wav");
      clip.duration_s = spec.clip_duration;
      cls.clips.push_back(std::move(clip));
    }
    m.classes.push_back(std::move(cls));
  }

  const std::size_t per_class = static_cast<std::size_t>(spec.clips_per_class);
  parallel_for(kArchetypes.size() * per_class, [&](std::size_t job) {
    const std::size_t c = job / per_class;
    const std::size_t k = job % per_class;
    const AudioClip audio = synth_clip(kArchetypes[c], static_cast<int>(k) + 1, spec);
    write_wav(audio, m.classes[c].clips[k].path);
  });
  return m;
}

}  // namespace chitin
