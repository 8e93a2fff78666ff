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

// Slow reference MFCC for one centered frame: explicit reflect padding,
// direct-summation DFT, explicit triangular filters, explicit DCT sums.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

inline double mel_of(double hz) {
  if (hz < 1000.0) return 3.0 * hz / 200.0;
  return 15.0 + 27.0 * std::log(hz / 1000.0) / std::log(6.4);
}

inline double hz_of(double mel) {
  if (mel < 15.0) return 200.0 * mel / 3.0;
  return 1000.0 * std::pow(6.4, (mel - 15.0) / 27.0);
}

/// n_mels x (n_fft/2 + 1) filters with unit area in Hz.
inline std::vector<std::vector<double>> filters(double sr, int n_fft, int n_mels, double fmin, double fmax) {
  std::vector<double> hz(static_cast<std::size_t>(n_mels) + 2);
  const double lo = mel_of(fmin), hi = mel_of(fmax);
  for (std::size_t i = 0; i < hz.size(); ++i) {
    hz[i] = hz_of(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(hz.size() - 1));
  }
  const int bins = n_fft / 2 + 1;
  std::vector<std::vector<double>> fb(static_cast<std::size_t>(n_mels), std::vector<double>(bins, 0.0));
  for (int m = 0; m < n_mels; ++m) {
    const double left = hz[m], centre = hz[m + 1], right = hz[m + 2];
    for (int k = 0; k < bins; ++k) {
      const double f = sr * k / n_fft;
      double w = 0.0;
      if (f > left && f <= centre) {
        w = (f - left) / (centre - left);
      } else if (f > centre && f < right) {
        w = (right - f) / (right - centre);
      }
      fb[m][k] = w * 2.0 / (right - left);
    }
  }
  return fb;
}

/// |X_k|^2 for k = 0..n/2 by direct summation.
inline std::vector<double> power_dft(const std::vector<double>& frame) {
  const std::size_t n = frame.size();
  std::vector<double> p(n / 2 + 1);
  for (std::size_t k = 0; k < p.size(); ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double phase = -2.0 * kPi * static_cast<double>((k * t) % n) / static_cast<double>(n);
      re += frame[t] * std::cos(phase);
      im += frame[t] * std::sin(phase);
    }
    p[k] = re * re + im * im;
  }
  return p;
}

/// Mirror an out-of-range index back into [0, n) by repeated bouncing.
inline std::size_t bounce(long long i, long long n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * (n - 1) - i;
  }
  return static_cast<std::size_t>(i);
}

/// Frame t of the centered, reflect-padded signal, Hann-windowed.
inline std::vector<double> frame_at(const std::vector<double>& x, std::size_t t, int n_fft, int hop) {
  std::vector<double> f(static_cast<std::size_t>(n_fft));
  const long long start = static_cast<long long>(t) * hop - n_fft / 2;
  for (int i = 0; i < n_fft; ++i) {
    const double w = 0.5 * (1.0 - std::cos(2.0 * kPi * i / n_fft));
    f[static_cast<std::size_t>(i)] = x[bounce(start + i, static_cast<long long>(x.size()))] * w;
  }
  return f;
}

inline std::vector<double> log_mel_frame(const std::vector<double>& x, std::size_t t, double sr, int n_fft, int hop,
                                         int n_mels) {
  const auto p = power_dft(frame_at(x, t, n_fft, hop));
  const auto fb = filters(sr, n_fft, n_mels, 0.0, sr / 2.0);
  std::vector<double> out(static_cast<std::size_t>(n_mels));
  for (int m = 0; m < n_mels; ++m) {
    double e = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) e += fb[m][k] * p[k];
    out[static_cast<std::size_t>(m)] = 10.0 * std::log10(std::max(e, 1e-10));
  }
  return out;
}

inline std::vector<double> dct2_ortho(const std::vector<double>& v, int keep) {
  const double n = static_cast<double>(v.size());
  std::vector<double> out(static_cast<std::size_t>(keep));
  for (int k = 0; k < keep; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * std::cos(kPi * k * (i + 0.5) / n);
    out[static_cast<std::size_t>(k)] = s * (k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n));
  }
  return out;
}

/// MFCCs of frame t.
inline std::vector<double> mfcc_frame(const std::vector<double>& x, std::size_t t, double sr, int n_mfcc = 40,
                                      int n_fft = 2048, int hop = 512, int n_mels = 128) {
  return dct2_ortho(log_mel_frame(x, t, sr, n_fft, hop, n_mels), n_mfcc);
}

/// Dominant frequency bin of a Hann-windowed direct DFT over the first n
/// samples; returns the bin's centre frequency in Hz.
inline double dominant_hz(const std::vector<double>& x, double sr, std::size_t n) {
  n = std::min(n, x.size());
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = x[i] * 0.5 * (1.0 - std::cos(2.0 * kPi * i / n));
  std::size_t best = 0;
  double best_p = -1.0;
  for (std::size_t k = 1; k < n / 2; ++k) {
    double re = 0.0, im = 0.0;
    const double step = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    // Incremental rotation keeps the O(n) inner loop cheap.
    const double cs = std::cos(step), sn = std::sin(step);
    double c = 1.0, s = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      re += w[t] * c;
      im += w[t] * s;
      const double c2 = c * cs - s * sn;
      s = c * sn + s * cs;
      c = c2;
    }
    const double p = re * re + im * im;
    if (p > best_p) {
      best_p = p;
      best = k;
    }
  }
  return sr * static_cast<double>(best) / static_cast<double>(n);
}

}  // namespace oracle
