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

/// Brute-force Euclidean k-nearest-neighbour classifier.
struct KnnModel {
  Matrix train;
  std::vector<int> labels;
  int n_classes = 0;
  int k = 5;

  /// Neighbours are ordered by distance, then by lower training row. The vote
  /// goes to the most frequent class; ties go to the smaller summed distance,
  /// then to the lower class index.
  int predict(std::span<const double> query) const;

  /// Training rows of the k nearest neighbours, nearest first.
  std::vector<std::size_t> neighbours(std::span<const double> query) const;

  bool operator==(const KnnModel&) const = default;
};

/// Throws InvalidArgument unless 1 <= k <= rows.
KnnModel fit_knn(const Matrix& x, std::span<const int> y, int n_classes, int k = 5);

}  // namespace chitin
