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

#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "chitin/audio_io.hpp"
#include "chitin/error.hpp"
#include "chitin/matrix.hpp"
#include "chitin/random.hpp"

namespace chitin::testing {

/// Fresh scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    std::string name = "chitin_";
    if (info) name += std::string(info->test_suite_name()) + "_" + info->name();
    path_ = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  std::filesystem::path path_;
};

inline AudioClip sine(double hz, double seconds, double sr = 44100.0, double amp = 0.5) {
  AudioClip c;
  c.sample_rate = sr;
  const auto n = static_cast<std::size_t>(std::llround(seconds * sr));
  c.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) c.samples[i] = amp * std::sin(2.0 * std::numbers::pi * hz * i / sr);
  return c;
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (auto& v : m.data) v = rng.uniform(lo, hi);
  return m;
}

/// Two Gaussian blobs per class centre; labels 0..k-1 cycling.
inline std::pair<Matrix, std::vector<int>> blobs(std::size_t per_class, int k, std::size_t d, double spread,
                                                 std::uint64_t seed) {
  Rng rng(seed);
  Matrix x(per_class * static_cast<std::size_t>(k), d);
  std::vector<int> y;
  for (std::size_t i = 0; i < x.rows; ++i) {
    const int c = static_cast<int>(i % static_cast<std::size_t>(k));
    y.push_back(c);
    for (std::size_t j = 0; j < d; ++j) x(i, j) = (j % static_cast<std::size_t>(k) == static_cast<std::size_t>(c) ? 4.0 : 0.0) + spread * rng.normal();
  }
  return {x, y};
}

#define EXPECT_CHITIN_ERROR(stmt, expected_code)                          \
  do {                                                                    \
    try {                                                                 \
      stmt;                                                               \
      ADD_FAILURE() << "expected " << ::chitin::to_string(expected_code); \
    } catch (const ::chitin::Error& e) {                                  \
      EXPECT_EQ(e.code(), expected_code) << e.what();                     \
    }                                                                     \
  } while (0)

}  // namespace chitin::testing
