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

#include "chitin/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "chitin/error.hpp"
#include "chitin/fileio.hpp"
#include "chitin/parallel.hpp"

namespace chitin {

using nlohmann::json;

namespace {

constexpr double kMelLinearHzPerMel = 200.0 / 3.0;
constexpr double kMelBreakHz = 1000.0;
constexpr double kMelBreak = kMelBreakHz / kMelLinearHzPerMel;  // 15
const double kMelLogStep = std::log(6.4) / 27.0;

// Index into a signal of length n extended by mirror reflection without
// repeating the edge sample (numpy "reflect").
std::size_t reflect_index(std::ptrdiff_t i, std::size_t n) {
  if (n == 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (n - 1));
  i = std::abs(i) % period;
  if (i >= static_cast<std::ptrdiff_t>(n)) i = period - i;
  return static_cast<std::size_t>(i);
}

}  // namespace

std::size_t stats_count(Stats s) { return s == Stats::Mean ? 1 : 2; }

std::string to_string(Stats s) { return s == Stats::Mean ? "mean" : "mean,std"; }

Stats parse_stats(std::string_view text) {
  if (text == "mean") return Stats::Mean;
  if (text == "mean,std" || text == "mean+std") return Stats::MeanStd;
  throw Error(ErrorCode::InvalidConfig, "stats must be 'mean' or 'mean,std', got '" + std::string(text) + "'");
}

void validate(const MfccConfig& cfg, double sample_rate) {
  if (!(sample_rate > 0.0)) throw Error(ErrorCode::InvalidConfig, "sample rate must be positive");
  if (cfg.n_mels < 1) throw Error(ErrorCode::InvalidConfig, "n_mels must be positive");
  if (cfg.n_mfcc < 1 || cfg.n_mfcc > cfg.n_mels) throw Error(ErrorCode::InvalidConfig, "need 0 < n_mfcc <= n_mels");
  if (cfg.n_fft < 1) throw Error(ErrorCode::InvalidConfig, "n_fft must be positive");
  if (cfg.hop < 1 || cfg.hop > cfg.n_fft) throw Error(ErrorCode::InvalidConfig, "need 0 < hop <= n_fft");
  const double fmax = cfg.effective_fmax(sample_rate);
  if (cfg.fmin < 0.0 || !(cfg.fmin < fmax) || fmax > sample_rate / 2.0) {
    throw Error(ErrorCode::InvalidConfig, "need 0 <= fmin < fmax <= sample_rate / 2");
  }
}

json to_json(const MfccConfig& cfg) {
  return {{"n_mfcc", cfg.n_mfcc}, {"n_fft", cfg.n_fft}, {"hop", cfg.hop},          {"n_mels", cfg.n_mels},
          {"fmin", cfg.fmin},     {"fmax", cfg.fmax},   {"stats", to_string(cfg.stats)}};
}

MfccConfig mfcc_config_from_json(const json& j) {
  MfccConfig cfg;
  try {
    cfg.n_mfcc = j.at("n_mfcc").get<int>();
    cfg.n_fft = j.at("n_fft").get<int>();
    cfg.hop = j.at("hop").get<int>();
    cfg.n_mels = j.at("n_mels").get<int>();
    cfg.fmin = j.at("fmin").get<double>();
    cfg.fmax = j.at("fmax").get<double>();
    cfg.stats = parse_stats(j.at("stats").get<std::string>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaViolation, std::string("mfcc_config: ") + e.what());
  }
  return cfg;
}

double hz_to_mel(double hz) {
  if (hz < kMelBreakHz) return hz / kMelLinearHzPerMel;
  return kMelBreak + std::log(hz / kMelBreakHz) / kMelLogStep;
}

double mel_to_hz(double mel) {
  if (mel < kMelBreak) return mel * kMelLinearHzPerMel;
  return kMelBreakHz * std::exp(kMelLogStep * (mel - kMelBreak));
}

Matrix mel_filterbank(double sample_rate, int n_fft, int n_mels, double fmin, double fmax) {
  const std::size_t bins = static_cast<std::size_t>(n_fft) / 2 + 1;
  const std::size_t edges_n = static_cast<std::size_t>(n_mels) + 2;

  std::vector<double> edges(edges_n);
  const double mel_lo = hz_to_mel(fmin);
  const double mel_hi = hz_to_mel(fmax);
  for (std::size_t i = 0; i < edges_n; ++i) {
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) / static_cast<double>(edges_n - 1));
  }

  Matrix fb(static_cast<std::size_t>(n_mels), bins);
  for (std::size_t m = 0; m < fb.rows; ++m) {
    const double lower_width = edges[m + 1] - edges[m];
    const double upper_width = edges[m + 2] - edges[m + 1];
    const double norm = 2.0 / (edges[m + 2] - edges[m]);
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / static_cast<double>(n_fft);
      const double rising = (f - edges[m]) / lower_width;
      const double falling = (edges[m + 2] - f) / upper_width;
      fb(m, k) = std::max(0.0, std::min(rising, falling)) * norm;
    }
  }
  return fb;
}

std::vector<double> dct_ortho(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += x[i] * std::cos(std::numbers::pi * static_cast<double>(k) * (2.0 * static_cast<double>(i) + 1.0) /
                             (2.0 * static_cast<double>(n)));
    }
    out[k] = acc * std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n));
  }
  return out;
}

std::vector<double> idct_ortho(std::span<const double> coeffs) {
  const std::size_t n = coeffs.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += coeffs[k] * std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n)) *
             std::cos(std::numbers::pi * static_cast<double>(k) * (2.0 * static_cast<double>(i) + 1.0) /
                      (2.0 * static_cast<double>(n)));
    }
    out[i] = acc;
  }
  return out;
}

std::size_t frame_count(std::size_t n_samples, int n_fft, int hop) {
  const std::size_t pad = static_cast<std::size_t>(n_fft / 2);
  const std::size_t padded = n_samples + 2 * pad;
  if (padded < static_cast<std::size_t>(n_fft)) return 0;
  return 1 + (padded - static_cast<std::size_t>(n_fft)) / static_cast<std::size_t>(hop);
}

MfccExtractor::MfccExtractor(const MfccConfig& cfg, double sample_rate)
    : cfg_(cfg), sample_rate_(sample_rate), spectrum_(static_cast<std::size_t>(std::max(cfg.n_fft, 1))) {
  validate(cfg_, sample_rate_);
  const auto n_fft = static_cast<std::size_t>(cfg_.n_fft);

  window_.resize(n_fft);
  for (std::size_t i = 0; i < n_fft; ++i) {
    window_[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n_fft));
  }

  filterbank_ = mel_filterbank(sample_rate_, cfg_.n_fft, cfg_.n_mels, cfg_.fmin, cfg_.effective_fmax(sample_rate_));
  band_support_.resize(filterbank_.rows);
  for (std::size_t m = 0; m < filterbank_.rows; ++m) {
    const auto w = filterbank_.row(m);
    std::size_t first = 0, last = w.size();
    while (first < last && w[first] == 0.0) ++first;
    while (last > first && w[last - 1] == 0.0) --last;
    band_support_[m] = {first, last};
  }

  const auto n_mels = static_cast<std::size_t>(cfg_.n_mels);
  dct_basis_ = Matrix(static_cast<std::size_t>(cfg_.n_mfcc), n_mels);
  for (std::size_t k = 0; k < dct_basis_.rows; ++k) {
    const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n_mels));
    for (std::size_t i = 0; i < n_mels; ++i) {
      dct_basis_(k, i) = scale * std::cos(std::numbers::pi * static_cast<double>(k) *
                                          (2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(n_mels)));
    }
  }
}

MfccFrames MfccExtractor::log_mel(std::span<const double> samples) const {
  if (samples.empty()) throw Error(ErrorCode::ClipTooShort, "clip has no samples");
  const auto n_fft = static_cast<std::size_t>(cfg_.n_fft);
  const auto hop = static_cast<std::size_t>(cfg_.hop);
  const auto pad = static_cast<std::ptrdiff_t>(n_fft / 2);
  const std::size_t n_frames = frame_count(samples.size(), cfg_.n_fft, cfg_.hop);

  MfccFrames out;
  out.n_coeffs = filterbank_.rows;
  out.n_frames = n_frames;
  out.data.assign(out.n_coeffs * n_frames, 0.0);

  std::vector<double> frame(n_fft);
  std::vector<double> power(spectrum_.bins());
  for (std::size_t t = 0; t < n_frames; ++t) {
    const auto start = static_cast<std::ptrdiff_t>(t * hop) - pad;
    for (std::size_t i = 0; i < n_fft; ++i) {
      frame[i] = samples[reflect_index(start + static_cast<std::ptrdiff_t>(i), samples.size())] * window_[i];
    }
    spectrum_.compute(frame, power);
    for (std::size_t m = 0; m < filterbank_.rows; ++m) {
      const auto weights = filterbank_.row(m);
      const auto [first, last] = band_support_[m];
      double energy = 0.0;
      for (std::size_t k = first; k < last; ++k) energy += weights[k] * power[k];
      out.at(m, t) = 10.0 * std::log10(std::max(energy, kPowerFloor));
    }
  }
  return out;
}

MfccFrames MfccExtractor::mfcc(std::span<const double> samples) const {
  const MfccFrames mel = log_mel(samples);
  MfccFrames out;
  out.n_coeffs = dct_basis_.rows;
  out.n_frames = mel.n_frames;
  out.data.assign(out.n_coeffs * out.n_frames, 0.0);
  for (std::size_t t = 0; t < out.n_frames; ++t) {
    for (std::size_t k = 0; k < out.n_coeffs; ++k) {
      const auto basis = dct_basis_.row(k);
      double acc = 0.0;
      for (std::size_t m = 0; m < mel.n_coeffs; ++m) acc += basis[m] * mel.at(m, t);
      out.at(k, t) = acc;
    }
  }
  return out;
}

MfccFrames mfcc(const AudioClip& clip, const MfccConfig& cfg) {
  return MfccExtractor(cfg, clip.sample_rate).mfcc(clip.samples);
}

std::vector<double> summarize(const MfccFrames& frames, Stats stats) {
  if (frames.n_frames == 0) throw Error(ErrorCode::ClipTooShort, "no frames to summarize");
  const std::size_t n = frames.n_coeffs;
  const auto count = static_cast<double>(frames.n_frames);
  std::vector<double> out(n * stats_count(stats), 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    double sum = 0.0;
    for (std::size_t t = 0; t < frames.n_frames; ++t) sum += frames.at(c, t);
    const double mean = sum / count;
    out[c] = mean;
    if (stats == Stats::MeanStd) {
      double sq = 0.0;
      for (std::size_t t = 0; t < frames.n_frames; ++t) {
        const double d = frames.at(c, t) - mean;
        sq += d * d;
      }
      out[n + c] = std::sqrt(sq / count);
    }
  }
  return out;
}

std::vector<std::string> feature_column_names(int n_mfcc, Stats stats) {
  std::vector<std::string> names;
  for (int i = 0; i < n_mfcc; ++i) names.push_back("mfcc_mean_" + std::to_string(i));
  if (stats == Stats::MeanStd) {
    for (int i = 0; i < n_mfcc; ++i) names.push_back("mfcc_std_" + std::to_string(i));
  }
  return names;
}

FeatureMatrix FeatureMatrix::select(std::span<const std::size_t> indices) const {
  FeatureMatrix out;
  out.values = values.select_rows(indices);
  out.column_names = column_names;
  for (std::size_t i : indices) {
    out.instance_ids.push_back(instance_ids[i]);
    out.labels.push_back(labels[i]);
    out.groups.push_back(groups[i]);
    out.augmented.push_back(augmented[i]);
  }
  return out;
}

FeatureMatrix FeatureMatrix::truncate(int n_mfcc) const {
  // Column names identify the blocks; both blocks share one coefficient count.
  std::size_t mean_cols = 0;
  for (const auto& name : column_names) mean_cols += name.rfind("mfcc_mean_", 0) == 0 ? 1 : 0;
  const bool has_std = mean_cols * 2 == cols();
  if (n_mfcc < 1 || static_cast<std::size_t>(n_mfcc) > mean_cols) {
    throw Error(ErrorCode::WidthMismatch, "cannot keep " + std::to_string(n_mfcc) + " of " +
                                              std::to_string(mean_cols) + " coefficients");
  }
  const auto keep = static_cast<std::size_t>(n_mfcc);
  std::vector<std::size_t> cols_kept;
  for (std::size_t c = 0; c < keep; ++c) cols_kept.push_back(c);
  if (has_std)
    for (std::size_t c = 0; c < keep; ++c) cols_kept.push_back(mean_cols + c);

  FeatureMatrix out = *this;
  out.values = Matrix(rows(), cols_kept.size());
  out.column_names.clear();
  for (std::size_t c : cols_kept) out.column_names.push_back(column_names[c]);
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t j = 0; j < cols_kept.size(); ++j) out.values(r, j) = values(r, cols_kept[j]);
  return out;
}

FeatureMatrix build_feature_matrix(std::span<const InstanceRecord> instances, const MfccConfig& cfg) {
  FeatureMatrix fm;
  fm.column_names = feature_column_names(cfg.n_mfcc, cfg.stats);
  fm.values = Matrix(instances.size(), cfg.feature_width());
  if (instances.empty()) return fm;

  const double sr = instances.front().audio.sample_rate;
  const std::size_t len = instances.front().audio.samples.size();
  for (const auto& inst : instances) {
    if (inst.audio.sample_rate != sr || inst.audio.samples.size() != len) {
      throw Error(ErrorCode::InvalidArgument, "instance " + inst.instance_id +
                                                  " differs in sample rate or length from the first instance");
    }
    fm.instance_ids.push_back(inst.instance_id);
    fm.labels.push_back(inst.class_label);
    fm.groups.push_back(inst.clip_id);
    fm.augmented.push_back(inst.augmented);
  }

  const MfccExtractor extractor(cfg, sr);
  parallel_for(instances.size(), [&](std::size_t i) {
    try {
      MfccFrames frames = extractor.mfcc(instances[i].audio.samples);
      const auto summary = summarize(frames, cfg.stats);
      std::copy(summary.begin(), summary.end(), fm.values.row(i).begin());
    } catch (const Error& e) {
      throw Error(e.code(), "instance " + instances[i].instance_id + ": " + e.what());
    }
  });

  for (double v : fm.values.data) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite feature value");
  }
  return fm;
}

void Standardizer::apply_row(std::span<const double> in, std::span<double> out) const {
  if (in.size() != width() || out.size() != width()) {
    throw Error(ErrorCode::WidthMismatch, "row width " + std::to_string(in.size()) + ", standardizer width " +
                                              std::to_string(width()));
  }
  for (std::size_t j = 0; j < width(); ++j) out[j] = (in[j] - mean[j]) / scale[j];
}

Standardizer fit_standardizer(const Matrix& train) {
  if (train.rows < 1) throw Error(ErrorCode::InvalidArgument, "cannot fit a standardizer on zero rows");
  Standardizer s;
  s.mean.assign(train.cols, 0.0);
  s.scale.assign(train.cols, 0.0);
  const auto n = static_cast<double>(train.rows);
  for (std::size_t j = 0; j < train.cols; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < train.rows; ++i) sum += train(i, j);
    bool constant = true;
    for (std::size_t i = 1; i < train.rows && constant; ++i) constant = train(i, j) == train(0, j);
    // A constant column keeps its exact value as the mean so it maps to 0.
    const double mean = constant ? train(0, j) : sum / n;
    double sq = 0.0;
    for (std::size_t i = 0; i < train.rows; ++i) {
      const double d = train(i, j) - mean;
      sq += d * d;
    }
    s.mean[j] = mean;
    s.scale[j] = std::max(std::sqrt(sq / n), kStdFloor);
  }
  return s;
}

Matrix apply_standardizer(const Standardizer& s, const Matrix& m) {
  if (m.cols != s.width()) {
    throw Error(ErrorCode::WidthMismatch, "matrix width " + std::to_string(m.cols) + ", standardizer width " +
                                              std::to_string(s.width()));
  }
  Matrix out(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i) s.apply_row(m.row(i), out.row(i));
  return out;
}

json to_json(const Standardizer& s) { return {{"mean", s.mean}, {"scale", s.scale}}; }

Standardizer standardizer_from_json(const json& j) {
  Standardizer s;
  try {
    s.mean = j.at("mean").get<std::vector<double>>();
    s.scale = j.at("scale").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaViolation, std::string("standardizer: ") + e.what());
  }
  if (s.mean.size() != s.scale.size()) throw Error(ErrorCode::SchemaViolation, "standardizer size mismatch");
  return s;
}

namespace {

void check_csv_field(const std::string& field) {
  if (field.find_first_of(",\"\n\r") != std::string::npos) {
    throw Error(ErrorCode::InvalidArgument, "CSV field contains a delimiter: " + field);
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::SchemaViolation, "not a number: '" + s + "'");
  }
  return v;
}

}  // namespace

void write_feature_csv(const FeatureMatrix& fm, const std::filesystem::path& path) {
  std::string out = "instance_id,clip_id,label";
  for (const auto& name : fm.column_names) out += "," + name;
  out += "\n";
  for (std::size_t r = 0; r < fm.rows(); ++r) {
    check_csv_field(fm.instance_ids[r]);
    check_csv_field(fm.labels[r]);
    out += fm.instance_ids[r] + "," + std::to_string(fm.groups[r]) + "," + fm.labels[r];
    for (double v : fm.values.row(r)) out += "," + format_double(v);
    out += "\n";
  }
  write_file_atomic(path, out);
}

FeatureMatrix read_feature_csv(const std::filesystem::path& path) {
  std::istringstream in(read_file_text(path));
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::SchemaViolation, path.string() + ": empty feature CSV");
  auto header = split_csv_line(line);
  if (header.size() < 4 || header[0] != "instance_id" || header[1] != "clip_id" || header[2] != "label") {
    throw Error(ErrorCode::SchemaViolation, path.string() + ": header must start with instance_id,clip_id,label");
  }

  FeatureMatrix fm;
  fm.column_names.assign(header.begin() + 3, header.end());
  const std::size_t width = fm.column_names.size();
  std::vector<double> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != width + 3) {
      throw Error(ErrorCode::SchemaViolation, path.string() + ":" + std::to_string(line_no) + ": expected " +
                                                  std::to_string(width + 3) + " fields");
    }
    fm.instance_ids.push_back(fields[0]);
    fm.groups.push_back(static_cast<int>(parse_double(fields[1])));
    fm.labels.push_back(fields[2]);
    fm.augmented.push_back(fields[0].find("__") != std::string::npos);
    for (std::size_t j = 0; j < width; ++j) values.push_back(parse_double(fields[3 + j]));
  }
  fm.values.rows = fm.instance_ids.size();
  fm.values.cols = width;
  fm.values.data = std::move(values);
  return fm;
}

}  // namespace chitin
