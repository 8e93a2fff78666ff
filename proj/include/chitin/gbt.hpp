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

struct RegressionNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf output, already scaled by the learning rate

  bool is_leaf() const { return feature < 0; }
  bool operator==(const RegressionNode&) const = default;
};

struct RegressionTree {
  std::vector<RegressionNode> nodes;

  double predict(std::span<const double> x) const;
  bool operator==(const RegressionTree&) const = default;
};

struct GbtParams {
  int rounds = 100;
  double learning_rate = 0.3;
  int max_depth = 6;
  double l2_lambda = 1.0;
};

/// Softmax gradient boosting: rounds[r][c] is the tree added to class c's
/// score in round r.
struct GbtModel {
  std::vector<std::vector<RegressionTree>> rounds;
  int n_classes = 0;
  std::size_t n_features = 0;
  std::vector<double> train_loss;  // mean cross-entropy before round 0, then after each round

  std::vector<double> scores(std::span<const double> x) const;
  std::vector<double> predict_proba(std::span<const double> x) const;
  /// argmax of the probabilities, ties to the lowest class index.
  int predict(std::span<const double> x) const;

  bool operator==(const GbtModel&) const = default;
};

/// Numerically stable softmax.
std::vector<double> softmax(std::span<const double> scores);

/// Second-order boosting on softmax cross-entropy. Per-class gradient is
/// p - [y == c] and hessian 2p(1 - p); leaves take -G / (H + lambda) and
/// splits maximize G_L^2/(H_L+l) + G_R^2/(H_R+l) - G^2/(H+l).
GbtModel train_gbt(const Matrix& x, std::span<const int> y, int n_classes, const GbtParams& params = {});

}  // namespace chitin
