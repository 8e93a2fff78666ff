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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chitin/audio_io.hpp"
#include "chitin/dataset.hpp"
#include "chitin/fft.hpp"
#include "chitin/matrix.hpp"

namespace chitin {

enum class Stats { Mean, MeanStd };

std::size_t stats_count(Stats s);
std::string to_string(Stats s);
/// Accepts "mean" or "mean,std".
Stats parse_stats(std::string_view text);

inline constexpr double kPowerFloor = 1e-10;

struct MfccConfig {
  int n_mfcc = 40;
  int n_fft = 2048;
  int hop = 512;
  int n_mels = 128;
  double fmin = 0.0;
  double fmax = 0.0;  // 0 means sample_rate / 2
  Stats stats = Stats::Mean;

  double effective_fmax(double sample_rate) const { return fmax > 0.0 ? fmax : sample_rate / 2.0; }
  std::size_t feature_width() const { return static_cast<std::size_t>(n_mfcc) * stats_count(stats); }

  bool operator==(const MfccConfig&) const = default;
};

/// Throws InvalidConfig unless 0 < n_mfcc <= n_mels, 0 < hop <= n_fft and
/// 0 <= fmin < fmax <= sample_rate / 2.
void validate(const MfccConfig& cfg, double sample_rate);

nlohmann::json to_json(const MfccConfig& cfg);
MfccConfig mfcc_config_from_json(const nlohmann::json& j);

// Slaney mel scale: linear below 1 kHz (3 mel per 200 Hz), logarithmic above
// with 27 mel per factor 6.4.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Triangular filters on n_mels + 2 mel-spaced edges, each scaled by
/// 2 / (upper_hz - lower_hz) so every filter has unit area in Hz.
/// Shape: n_mels x (n_fft / 2 + 1).
Matrix mel_filterbank(double sample_rate, int n_fft, int n_mels, double fmin, double fmax);

/// Orthonormal DCT-II and its inverse (orthonormal DCT-III).
std::vector<double> dct_ortho(std::span<const double> x);
std::vector<double> idct_ortho(std::span<const double> coeffs);

/// Frame count for centered framing: 1 + floor(len / hop) for even n_fft.
std::size_t frame_count(std::size_t n_samples, int n_fft, int hop);

/// Coefficient-major matrix: at(c, t) is coefficient c of frame t.
struct MfccFrames {
  std::size_t n_coeffs = 0;
  std::size_t n_frames = 0;
  std::vector<double> data;
  std::string instance_id;

  double at(std::size_t c, std::size_t t) const { return data[c * n_frames + t]; }
  double& at(std::size_t c, std::size_t t) { return data[c * n_frames + t]; }
};

/// Precomputed window, filterbank, DCT basis and transform plan for one
/// (config, sample rate) pair. Const methods are reentrant.
class MfccExtractor {
 public:
  MfccExtractor(const MfccConfig& cfg, double sample_rate);

  const MfccConfig& config() const { return cfg_; }
  double sample_rate() const { return sample_rate_; }
  const Matrix& filterbank() const { return filterbank_; }

  /// dB log-mel energies, n_mels rows by n_frames columns (coefficient-major).
  MfccFrames log_mel(std::span<const double> samples) const;

  MfccFrames mfcc(std::span<const double> samples) const;

 private:
  MfccConfig cfg_;
  double sample_rate_;
  std::vector<double> window_;
  Matrix filterbank_;
  std::vector<std::pair<std::size_t, std::size_t>> band_support_;  // [first, last) nonzero bins
  Matrix dct_basis_;  // n_mfcc x n_mels
  PowerSpectrum spectrum_;
};

/// Pipeline: reflect-padded centered frames, periodic Hann window, power
/// spectrum, mel filterbank, 10*log10(max(p, 1e-10)), orthonormal DCT-II,
/// first n_mfcc rows. Throws ClipTooShort for an empty clip.
MfccFrames mfcc(const AudioClip& clip, const MfccConfig& cfg);

/// Per-coefficient mean across frames, followed by the population standard
/// deviation block when stats is MeanStd.
std::vector<double> summarize(const MfccFrames& frames, Stats stats);

std::vector<std::string> feature_column_names(int n_mfcc, Stats stats);

struct FeatureMatrix {
  Matrix values;
  std::vector<std::string> column_names;
  std::vector<std::string> instance_ids;
  std::vector<std::string> labels;
  std::vector<int> groups;
  std::vector<bool> augmented;

  std::size_t rows() const { return values.rows; }
  std::size_t cols() const { return values.cols; }

  /// Subset of rows, in the given order, with metadata.
  FeatureMatrix select(std::span<const std::size_t> indices) const;

  /// Keeps only the first n_mfcc coefficients of each statistic block.
  FeatureMatrix truncate(int n_mfcc) const;
};

/// Rows follow input order. All instances must share one sample rate and one
/// length; mfcc failures are rethrown with the instance id attached.
FeatureMatrix build_feature_matrix(std::span<const InstanceRecord> instances, const MfccConfig& cfg);

inline constexpr double kStdFloor = 1e-8;

struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;  // population std floored at kStdFloor

  std::size_t width() const { return mean.size(); }
  void apply_row(std::span<const double> in, std::span<double> out) const;

  bool operator==(const Standardizer&) const = default;
};

Standardizer fit_standardizer(const Matrix& train);
/// Throws WidthMismatch when m.cols differs from the fitted width.
Matrix apply_standardizer(const Standardizer& s, const Matrix& m);

nlohmann::json to_json(const Standardizer& s);
Standardizer standardizer_from_json(const nlohmann::json& j);

void write_feature_csv(const FeatureMatrix& fm, const std::filesystem::path& path);
FeatureMatrix read_feature_csv(const std::filesystem::path& path);

}  // namespace chitin
