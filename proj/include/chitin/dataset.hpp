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
#include <string_view>
#include <vector>

#include <json.hpp>

#include "chitin/audio_io.hpp"

namespace chitin {

inline constexpr int kManifestSchemaVersion = 1;

struct InstanceEntry {
  std::string instance_id;
  std::filesystem::path path;
  bool augmented = false;
  std::string transform;  // empty for originals, e.g. "speed0.9"

  bool operator==(const InstanceEntry&) const = default;
};

struct ClipEntry {
  int clip_id = 1;  // 1-based, contiguous within a class
  std::filesystem::path path;
  double duration_s = 0.0;
  std::vector<InstanceEntry> instances;

  bool operator==(const ClipEntry&) const = default;
};

struct ClassEntry {
  std::string name;
  std::vector<ClipEntry> clips;

  bool operator==(const ClassEntry&) const = default;
};

/// Per-class, per-clip inventory of recordings and the fixed-length
/// instances cut from them.
///
/// Paths are held as loaded: load_manifest resolves relative paths against
/// the manifest's directory, and save_manifest writes absolute paths relative
/// to the destination directory.
struct DatasetManifest {
  int schema_version = kManifestSchemaVersion;
  double window_seconds = 1.0;
  std::vector<ClassEntry> classes;
  nlohmann::json provenance = nlohmann::json::object();

  std::size_t instance_count() const;
  std::size_t clip_count() const;
  const ClassEntry* find_class(std::string_view name) const;

  bool operator==(const DatasetManifest&) const = default;
};

/// One labeled window of audio with its clip provenance.
struct InstanceRecord {
  std::string instance_id;
  std::string class_label;
  int clip_id = 1;
  AudioClip audio;
  bool augmented = false;
  std::string transform;
};

/// Throws SchemaViolation on duplicate class names, non-contiguous clip ids,
/// or an instance id owned by more than one clip. When check_files is set,
/// every instance path must exist (DanglingInstanceReference otherwise).
void validate_manifest(const DatasetManifest& manifest, bool check_files);

nlohmann::json manifest_to_json(const DatasetManifest& manifest, const std::filesystem::path& base_dir);
DatasetManifest manifest_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

DatasetManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

/// Number of samples in one window at the given rate.
std::size_t window_samples(double window_seconds, double sample_rate);

std::string make_instance_id(std::string_view class_label, int clip_id, std::size_t index);

/// Cuts consecutive non-overlapping windows from t = 0. A trailing remainder
/// shorter than one window is dropped.
std::vector<InstanceRecord> segment_clip(const AudioClip& clip, double window_seconds,
                                         std::string_view class_label = "", int clip_id = 1);

struct SampleResult {
  DatasetManifest manifest;
  std::vector<std::string> warnings;
};

/// Draws up to per_class instances per class uniformly without replacement.
/// Selected instances keep their original manifest order. Classes holding
/// fewer than per_class instances are taken whole with a warning; a class with
/// none raises EmptyClass.
SampleResult sample_instances(const DatasetManifest& manifest, std::size_t per_class, std::uint64_t seed);

/// Scans root/<class>/*.wav. Classes and clips are ordered by name; clip ids
/// are assigned 1..n in that order.
DatasetManifest manifest_from_directory(const std::filesystem::path& root);

/// Loads each clip, converts to mono at sample_rate, segments it and writes
/// instances to out_dir/<class>/clip<k>/<instance_id>.wav. Returns the input
/// manifest with instance lists replaced.
DatasetManifest segment_manifest(const DatasetManifest& clips, double window_seconds, double sample_rate,
                                 const std::filesystem::path& out_dir);

/// Reads every instance listed in the manifest, in manifest order.
std::vector<InstanceRecord> load_instances(const DatasetManifest& manifest, double sample_rate);

/// Ordered clip ids shared by all classes. Throws SchemaViolation when the
/// classes disagree on their clip ids.
std::vector<int> shared_clip_ids(const DatasetManifest& manifest);

}  // namespace chitin
