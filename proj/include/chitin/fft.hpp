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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace chitin {

/// Power spectrum |X_k|^2 for k = 0..n/2 of real frames of length n.
///
/// Power-of-two lengths use an iterative radix-2 transform with precomputed
/// twiddles; any other length falls back to direct O(n^2) summation with a
/// precomputed cosine/sine table. The plan is immutable after construction
/// and all scratch space is per call, so one plan may be shared by threads.
class PowerSpectrum {
 public:
  explicit PowerSpectrum(std::size_t n);

  std::size_t size() const { return n_; }
  std::size_t bins() const { return n_ / 2 + 1; }

  /// frame.size() must equal size(); out.size() must equal bins().
  void compute(std::span<const double> frame, std::span<double> out) const;

 private:
  void fft(std::vector<std::complex<double>>& a) const;

  std::size_t n_;
  bool radix2_;
  std::vector<std::complex<double>> twiddles_;
  std::vector<std::size_t> bitrev_;
  std::vector<double> cos_table_, sin_table_;
};

}  // namespace chitin
