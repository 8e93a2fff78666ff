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

#include "chitin/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <unordered_set>

#include "chitin/error.hpp"
#include "chitin/fileio.hpp"
#include "chitin/parallel.hpp"
#include "chitin/random.hpp"

namespace chitin {

namespace fs = std::filesystem;
using nlohmann::json;

std::size_t DatasetManifest::instance_count() const {
  std::size_t n = 0;
  for (const auto& c : classes)
    for (const auto& clip : c.clips) n += clip.instances.size();
  return n;
}

std::size_t DatasetManifest::clip_count() const {
  std::size_t n = 0;
  for (const auto& c : classes) n += c.clips.size();
  return n;
}

const ClassEntry* DatasetManifest::find_class(std::string_view name) const {
  for (const auto& c : classes)
    if (c.name == name) return &c;
  return nullptr;
}

void validate_manifest(const DatasetManifest& manifest, bool check_files) {
  if (manifest.schema_version != kManifestSchemaVersion) {
    throw Error(ErrorCode::SchemaViolation, "unsupported manifest schema_version " +
                                                std::to_string(manifest.schema_version));
  }
  if (!(manifest.window_seconds > 0.0)) throw Error(ErrorCode::SchemaViolation, "window_seconds must be positive");

  std::set<std::string> names;
  std::unordered_set<std::string> instance_ids;
  for (const auto& cls : manifest.classes) {
    if (cls.name.empty()) throw Error(ErrorCode::SchemaViolation, "empty class name");
    if (!names.insert(cls.name).second) throw Error(ErrorCode::SchemaViolation, "duplicate class " + cls.name);
    for (std::size_t i = 0; i < cls.clips.size(); ++i) {
      const auto& clip = cls.clips[i];
      if (clip.clip_id != static_cast<int>(i) + 1) {
        throw Error(ErrorCode::SchemaViolation, "class " + cls.name + ": clip ids must run 1.." +
                                                    std::to_string(cls.clips.size()) + " in order");
      }
      for (const auto& inst : clip.instances) {
        if (inst.instance_id.empty()) throw Error(ErrorCode::SchemaViolation, "empty instance_id");
        if (!instance_ids.insert(inst.instance_id).second) {
          throw Error(ErrorCode::SchemaViolation, "instance " + inst.instance_id + " has more than one owner");
        }
        if (check_files && !fs::exists(inst.path)) {
          throw Error(ErrorCode::DanglingInstanceReference,
                      "instance " + inst.instance_id + " references missing file " + inst.path.string());
        }
      }
    }
  }
}

namespace {

std::string path_for_json(const fs::path& p, const fs::path& base_dir) {
  if (p.empty()) return "";
  if (p.is_absolute() && !base_dir.empty()) {
    return p.lexically_relative(fs::absolute(base_dir).lexically_normal()).generic_string();
  }
  return p.generic_string();
}

fs::path path_from_json(const std::string& s, const fs::path& base_dir) {
  if (s.empty()) return {};
  fs::path p(s);
  if (p.is_relative() && !base_dir.empty()) p = fs::absolute(base_dir) / p;
  return p.lexically_normal();
}

}  // namespace

json manifest_to_json(const DatasetManifest& manifest, const fs::path& base_dir) {
  json classes = json::array();
  for (const auto& cls : manifest.classes) {
    json clips = json::array();
    for (const auto& clip : cls.clips) {
      json instances = json::array();
      for (const auto& inst : clip.instances) {
        instances.push_back({{"instance_id", inst.instance_id},
                             {"path", path_for_json(inst.path, base_dir)},
                             {"augmented", inst.augmented},
                             {"transform", inst.transform}});
      }
      clips.push_back({{"clip_id", clip.clip_id},
                       {"path", path_for_json(clip.path, base_dir)},
                       {"duration_s", clip.duration_s},
                       {"instances", std::move(instances)}});
    }
    classes.push_back({{"name", cls.name}, {"clips", std::move(clips)}});
  }
  json j = {{"schema_version", manifest.schema_version},
            {"window_seconds", manifest.window_seconds},
            {"classes", std::move(classes)}};
  if (!manifest.provenance.empty()) j["provenance"] = manifest.provenance;
  return j;
}

DatasetManifest manifest_from_json(const json& j, const fs::path& base_dir) {
  DatasetManifest m;
  try {
    m.schema_version = j.at("schema_version").get<int>();
    m.window_seconds = j.at("window_seconds").get<double>();
    for (const auto& jc : j.at("classes")) {
      ClassEntry cls;
      cls.name = jc.at("name").get<std::string>();
      for (const auto& jclip : jc.at("clips")) {
        ClipEntry clip;
        clip.clip_id = jclip.at("clip_id").get<int>();
        clip.path = path_from_json(jclip.value("path", std::string{}), base_dir);
        clip.duration_s = jclip.value("duration_s", 0.0);
        for (const auto& ji : jclip.value("instances", json::array())) {
          InstanceEntry inst;
          inst.instance_id = ji.at("instance_id").get<std::string>();
          inst.path = path_from_json(ji.at("path").get<std::string>(), base_dir);
          inst.augmented = ji.value("augmented", false);
          inst.transform = ji.value("transform", std::string{});
          clip.instances.push_back(std::move(inst));
        }
        cls.clips.push_back(std::move(clip));
      }
      m.classes.push_back(std::move(cls));
    }
    if (j.contains("provenance")) m.provenance = j.at("provenance");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaViolation, e.what());
  }
  return m;
}

DatasetManifest load_manifest(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_file_text(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaViolation, path.string() + ": " + e.what());
  }
  DatasetManifest m = manifest_from_json(j, path.parent_path());
  validate_manifest(m, /*check_files=*/true);
  return m;
}

void save_manifest(const DatasetManifest& manifest, const fs::path& path) {
  validate_manifest(manifest, /*check_files=*/false);
  write_file_atomic(path, manifest_to_json(manifest, path.parent_path()).dump(2) + "\n");
}

std::size_t window_samples(double window_seconds, double sample_rate) {
  return static_cast<std::size_t>(std::llround(window_seconds * sample_rate));
}

std::string make_instance_id(std::string_view class_label, int clip_id, std::size_t index) {
  char suffix[32];
  std::snprintf(suffix, sizeof suffix, "_clip%d_%03zu", clip_id, index + 1);
  return std::string(class_label) + suffix;
}

std::vector<InstanceRecord> segment_clip(const AudioClip& clip, double window_seconds,
                                         std::string_view class_label, int clip_id) {
  if (!(window_seconds > 0.0)) throw Error(ErrorCode::InvalidArgument, "window_seconds must be positive");
  const std::size_t width = window_samples(window_seconds, clip.sample_rate);
  if (width == 0) throw Error(ErrorCode::InvalidArgument, "window shorter than one sample");

  const std::size_t count = clip.samples.size() / width;
  std::vector<InstanceRecord> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    InstanceRecord rec;
    rec.instance_id = make_instance_id(class_label, clip_id, i);
    rec.class_label = std::string(class_label);
    rec.clip_id = clip_id;
    rec.audio.sample_rate = clip.sample_rate;
    rec.audio.source_path = clip.source_path;
    const auto begin = clip.samples.begin() + static_cast<std::ptrdiff_t>(i * width);
    rec.audio.samples.assign(begin, begin + static_cast<std::ptrdiff_t>(width));
    out.push_back(std::move(rec));
  }
  return out;
}

SampleResult sample_instances(const DatasetManifest& manifest, std::size_t per_class, std::uint64_t seed) {
  if (per_class < 1) throw Error(ErrorCode::InvalidArgument, "per_class must be >= 1");
  SampleResult result;
  result.manifest = manifest;

  // Draws are made over original instances; augmented copies follow their
  // source (the instance id before the "__" transform tag).
  for (std::size_t c = 0; c < result.manifest.classes.size(); ++c) {
    auto& cls = result.manifest.classes[c];
    std::size_t total = 0;
    for (const auto& clip : cls.clips)
      for (const auto& inst : clip.instances) total += inst.augmented ? 0 : 1;
    if (total == 0) throw Error(ErrorCode::EmptyClass, "class " + cls.name + " has no instances");

    if (total <= per_class) {
      if (total < per_class) {
        result.warnings.push_back("class " + cls.name + " holds " + std::to_string(total) +
                                  " instances, fewer than the requested " + std::to_string(per_class) +
                                  "; all taken");
      }
      continue;
    }

    // Partial Fisher-Yates over flat positions, one stream per class.
    std::vector<std::size_t> order(total);
    for (std::size_t i = 0; i < total; ++i) order[i] = i;
    Rng rng(derive_seed(seed, {c}));
    for (std::size_t i = 0; i < per_class; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(total - i));
      std::swap(order[i], order[j]);
    }
    std::vector<bool> keep(total, false);
    for (std::size_t i = 0; i < per_class; ++i) keep[order[i]] = true;

    std::unordered_set<std::string> kept_ids;
    std::size_t flat = 0;
    for (const auto& clip : cls.clips)
      for (const auto& inst : clip.instances)
        if (!inst.augmented && keep[flat++]) kept_ids.insert(inst.instance_id);

    for (auto& clip : cls.clips) {
      std::vector<InstanceEntry> kept;
      for (auto& inst : clip.instances) {
        const std::string source = inst.augmented ? inst.instance_id.substr(0, inst.instance_id.rfind("__"))
                                                  : inst.instance_id;
        if (kept_ids.count(source)) kept.push_back(std::move(inst));
      }
      clip.instances = std::move(kept);
    }
  }
  return result;
}

DatasetManifest manifest_from_directory(const fs::path& root) {
  if (!fs::is_directory(root)) throw Error(ErrorCode::IoFailure, root.string() + " is not a directory");
  std::vector<fs::path> class_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) class_dirs.push_back(entry.path());
  }
  std::sort(class_dirs.begin(), class_dirs.end());

  DatasetManifest m;
  for (const auto& dir : class_dirs) {
    std::vector<fs::path> wavs;
    for (const auto& entry : fs::directory_iterator(dir)) {
      auto ext = entry.path().extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
      if (entry.is_regular_file() && ext == ".wav") wavs.push_back(fs::absolute(entry.path()).lexically_normal());
    }
    if (wavs.empty()) continue;
    std::sort(wavs.begin(), wavs.end());
    ClassEntry cls;
    cls.name = dir.filename().string();
    for (std::size_t i = 0; i < wavs.size(); ++i) {
      ClipEntry clip;
      clip.clip_id = static_cast<int>(i) + 1;
      clip.path = wavs[i];
      cls.clips.push_back(std::move(clip));
    }
    m.classes.push_back(std::move(cls));
  }
  return m;
}

DatasetManifest segment_manifest(const DatasetManifest& clips, double window_seconds, double sample_rate,
                                 const fs::path& out_dir) {
  DatasetManifest out = clips;
  out.window_seconds = window_seconds;

  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t c = 0; c < out.classes.size(); ++c)
    for (std::size_t k = 0; k < out.classes[c].clips.size(); ++k) jobs.emplace_back(c, k);

  const fs::path root = fs::absolute(out_dir).lexically_normal();
  parallel_for(jobs.size(), [&](std::size_t j) {
    auto& cls = out.classes[jobs[j].first];
    auto& clip = cls.clips[jobs[j].second];
    if (clip.path.empty()) {
      throw Error(ErrorCode::SchemaViolation, "class " + cls.name + " clip " + std::to_string(clip.clip_id) +
                                                  " has no audio path");
    }
    const AudioClip audio = load_audio(clip.path, sample_rate);
    clip.duration_s = audio.duration_seconds();
    clip.instances.clear();
    const fs::path dir = root / cls.name / ("clip" + std::to_string(clip.clip_id));
    for (auto& rec : segment_clip(audio, window_seconds, cls.name, clip.clip_id)) {
      InstanceEntry entry;
      entry.instance_id = rec.instance_id;
      entry.path = dir / (rec.instance_id + ".wav");
      write_wav(rec.audio, entry.path);
      clip.instances.push_back(std::move(entry));
    }
  });
  return out;
}

std::vector<InstanceRecord> load_instances(const DatasetManifest& manifest, double sample_rate) {
  struct Slot {
    const ClassEntry* cls;
    const ClipEntry* clip;
    const InstanceEntry* inst;
  };
  std::vector<Slot> slots;
  for (const auto& cls : manifest.classes)
    for (const auto& clip : cls.clips)
      for (const auto& inst : clip.instances) slots.push_back({&cls, &clip, &inst});

  std::vector<InstanceRecord> out(slots.size());
  parallel_for(slots.size(), [&](std::size_t i) {
    const auto& s = slots[i];
    InstanceRecord& rec = out[i];
    rec.instance_id = s.inst->instance_id;
    rec.class_label = s.cls->name;
    rec.clip_id = s.clip->clip_id;
    rec.augmented = s.inst->augmented;
    rec.transform = s.inst->transform;
    try {
      rec.audio = load_audio(s.inst->path, sample_rate);
    } catch (const Error& e) {
      throw Error(e.code(), "instance " + rec.instance_id + ": " + e.what());
    }
  });
  return out;
}

std::vector<int> shared_clip_ids(const DatasetManifest& manifest) {
  if (manifest.classes.empty()) return {};
  std::vector<int> ids;
  for (const auto& clip : manifest.classes.front().clips) ids.push_back(clip.clip_id);
  for (const auto& cls : manifest.classes) {
    std::vector<int> other;
    for (const auto& clip : cls.clips) other.push_back(clip.clip_id);
    if (other != ids) {
      throw Error(ErrorCode::SchemaViolation, "class " + cls.name + " has clip ids that differ from class " +
                                                  manifest.classes.front().name);
    }
  }
  return ids;
}

}  // namespace chitin
