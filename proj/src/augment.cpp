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

#include "chitin/augment.hpp"

#include <cmath>
#include <unordered_set>

#include "chitin/error.hpp"
#include "chitin/fileio.hpp"
#include "chitin/parallel.hpp"

namespace chitin {

namespace fs = std::filesystem;

namespace {

void check_factor(double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw Error(ErrorCode::InvalidArgument, "augmentation factor must be positive and finite");
  }
}

std::size_t scaled_length(std::size_t len, double factor) {
  return static_cast<std::size_t>(std::llround(static_cast<double>(len) / factor));
}

}  // namespace

void validate(const AugmentSpec& spec) {
  for (double f : spec.speed_factors) check_factor(f);
  for (double f : spec.pitch_factors) check_factor(f);
}

AudioClip speed_change(const AudioClip& clip, double factor) {
  check_factor(factor);
  if (scaled_length(clip.samples.size(), factor) < 1) {
    throw Error(ErrorCode::DegenerateOutput, "speed factor leaves no samples");
  }
  // Resampling to sample_rate / factor and keeping the old rate label plays
  // the same content factor times faster.
  AudioClip out = resample(clip, clip.sample_rate / factor);
  out.sample_rate = clip.sample_rate;
  return out;
}

AudioClip pitch_shift(const AudioClip& clip, double factor) {
  check_factor(factor);
  if (scaled_length(clip.samples.size(), factor) < 1) {
    throw Error(ErrorCode::DegenerateOutput, "pitch factor leaves no samples");
  }
  AudioClip relabelled = clip;
  relabelled.sample_rate = clip.sample_rate * factor;
  return resample(relabelled, clip.sample_rate);
}

std::string transform_tag(const std::string& kind, double factor) { return kind + format_double(factor); }

std::vector<InstanceRecord> augment_instance(const InstanceRecord& original, const AugmentSpec& spec,
                                             std::size_t window) {
  std::vector<InstanceRecord> out;
  auto emit = [&](const std::string& kind, double factor, AudioClip audio) {
    if (audio.samples.size() < window) return;
    audio.samples.resize(window);
    InstanceRecord rec;
    rec.transform = transform_tag(kind, factor);
    rec.instance_id = original.instance_id + "__" + rec.transform;
    rec.class_label = original.class_label;
    rec.clip_id = original.clip_id;
    rec.audio = std::move(audio);
    rec.augmented = true;
    out.push_back(std::move(rec));
  };
  for (double f : spec.speed_factors) emit("speed", f, speed_change(original.audio, f));
  for (double f : spec.pitch_factors) emit("pitch", f, pitch_shift(original.audio, f));
  return out;
}

DatasetManifest augment_dataset(const DatasetManifest& manifest, const AugmentSpec& spec, double sample_rate,
                                const fs::path& out_dir) {
  validate(spec);
  DatasetManifest out = manifest;
  const std::size_t window = window_samples(manifest.window_seconds, sample_rate);

  struct Job {
    std::size_t cls, clip;
    const InstanceEntry* entry;
  };
  std::vector<Job> jobs;
  std::unordered_set<std::string> existing;
  for (std::size_t c = 0; c < manifest.classes.size(); ++c)
    for (std::size_t k = 0; k < manifest.classes[c].clips.size(); ++k)
      for (const auto& inst : manifest.classes[c].clips[k].instances) {
        existing.insert(inst.instance_id);
        if (!inst.augmented) jobs.push_back({c, k, &inst});
      }

  const fs::path root = out_dir.empty() ? fs::path{} : fs::absolute(out_dir).lexically_normal();
  std::vector<std::vector<InstanceEntry>> produced(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t j) {
    const auto& job = jobs[j];
    const auto& cls = manifest.classes[job.cls];
    const auto& clip = cls.clips[job.clip];
    InstanceRecord original;
    original.instance_id = job.entry->instance_id;
    original.class_label = cls.name;
    original.clip_id = clip.clip_id;
    try {
      original.audio = load_audio(job.entry->path, sample_rate);
    } catch (const Error& e) {
      throw Error(e.code(), "instance " + original.instance_id + ": " + e.what());
    }
    const fs::path dir = root.empty() ? job.entry->path.parent_path()
                                      : root / cls.name / ("clip" + std::to_string(clip.clip_id));
    for (auto& rec : augment_instance(original, spec, window)) {
      if (existing.count(rec.instance_id)) continue;
      InstanceEntry entry;
      entry.instance_id = rec.instance_id;
      entry.path = dir / (rec.instance_id + ".wav");
      entry.augmented = true;
      entry.transform = rec.transform;
      write_wav(rec.audio, entry.path);
      produced[j].push_back(std::move(entry));
    }
  });

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    auto& dest = out.classes[jobs[j].cls].clips[jobs[j].clip].instances;
    for (auto& e : produced[j]) dest.push_back(std::move(e));
  }
  return out;
}

}  // namespace chitin
