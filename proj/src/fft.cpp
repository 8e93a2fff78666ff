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

#include "chitin/fft.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "chitin/error.hpp"

namespace chitin {

PowerSpectrum::PowerSpectrum(std::size_t n) : n_(n), radix2_(std::has_single_bit(n)) {
  if (n == 0) throw Error(ErrorCode::InvalidConfig, "transform length must be positive");
  if (radix2_) {
    twiddles_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      twiddles_[k] = {std::cos(angle), std::sin(angle)};
    }
    const int bits = std::countr_zero(n);
    bitrev_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
      bitrev_[i] = r;
    }
  } else {
    cos_table_.resize(n);
    sin_table_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      cos_table_[k] = std::cos(angle);
      sin_table_[k] = std::sin(angle);
    }
  }
}

void PowerSpectrum::fft(std::vector<std::complex<double>>& a) const {
  for (std::size_t i = 0; i < n_; ++i) {
    if (i < bitrev_[i]) std::swap(a[i], a[bitrev_[i]]);
  }
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const std::complex<double> t = twiddles_[k * stride] * a[start + k + half];
        a[start + k + half] = a[start + k] - t;
        a[start + k] += t;
      }
    }
  }
}

void PowerSpectrum::compute(std::span<const double> frame, std::span<double> out) const {
  if (frame.size() != n_ || out.size() != bins()) {
    throw Error(ErrorCode::ShapeMismatch, "power spectrum buffer sizes do not match the plan");
  }
  if (radix2_) {
    std::vector<std::complex<double>> a(frame.begin(), frame.end());
    fft(a);
    for (std::size_t k = 0; k < bins(); ++k) out[k] = std::norm(a[k]);
    return;
  }
  for (std::size_t k = 0; k < bins(); ++k) {
    double re = 0.0, im = 0.0;
    std::size_t idx = 0;
    for (std::size_t t = 0; t < n_; ++t) {
      re += frame[t] * cos_table_[idx];
      im -= frame[t] * sin_table_[idx];
      idx += k;
      if (idx >= n_) idx -= n_;
    }
    out[k] = re * re + im * im;
  }
}

}  // namespace chitin
