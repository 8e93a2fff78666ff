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

#include <span>
#include <vector>

#include "chitin/matrix.hpp"

namespace chitin {

struct SvmParams {
  double c = 1.0;
  double gamma = 0.0;  // <= 0 means "scale": 1 / (d * Var(X))
  double tol = 1e-3;
  int max_passes = 200;  // iteration cap is max_passes * n_train
};

/// 1 / (d * Var(X)) over every entry of x; 1.0 when the variance is zero.
double gamma_scale(const Matrix& x);

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

/// Binary machine: f(x) = sum_i coef_i * k(sv_i, x) + bias, where
/// coef_i = alpha_i * y_i.
struct BinarySvm {
  Matrix support_vectors;
  std::vector<double> alpha;  // in [0, C], aligned with support_vectors
  std::vector<double> coef;   // alpha * y
  double bias = 0.0;
  bool converged = true;
  int iterations = 0;

  double decision(std::span<const double> x, double gamma) const;
  bool operator==(const BinarySvm&) const = default;
};

struct SvmModel {
  std::vector<BinarySvm> machines;  // one per class, class c vs rest
  double gamma = 1.0;
  double c = 1.0;
  std::size_t n_features = 0;

  std::vector<double> decision(std::span<const double> x) const;
  /// argmax of the per-class scores, ties to the lowest class index.
  int predict(std::span<const double> x) const;
  bool converged() const;

  bool operator==(const SvmModel&) const = default;
};

/// Solves min 1/2 a'Qa - e'a s.t. 0 <= a <= C, y'a = 0 by SMO with
/// second-order working-set selection. y holds +1/-1. A machine that hits the
/// iteration cap is returned with converged = false.
BinarySvm train_binary_svm(const Matrix& x, std::span<const double> y, const Matrix& kernel,
                           const SvmParams& params);

/// One-vs-rest multiclass training; machines train in parallel.
SvmModel train_svm_rbf(const Matrix& x, std::span<const int> y, int n_classes, const SvmParams& params = {});

/// Full kernel matrix K(i, j) = exp(-gamma * |x_i - x_j|^2).
Matrix kernel_matrix(const Matrix& x, double gamma);

}  // namespace chitin
