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
#include <span>
#include <vector>

#include "chitin/matrix.hpp"
#include "chitin/tree.hpp"

namespace chitin {

struct ForestParams {
  int n_estimators = 100;
  std::uint64_t base_seed = 42;
  bool bootstrap = true;  // false trains every tree on all rows (test hook)
  int max_features = 0;   // 0 means ceil(sqrt(d))
  int max_depth = -1;
  int min_samples_split = 2;
};

struct RandomForest {
  std::vector<DecisionTree> trees;
  int n_classes = 0;
  std::size_t n_features = 0;

  std::vector<int> votes(std::span<const double> x) const;
  /// Majority vote; ties go to the lowest class index.
  int predict(std::span<const double> x) const;

  bool operator==(const RandomForest&) const = default;
};

/// Tree t draws its bootstrap and per-split feature subsets from a stream
/// seeded by (base_seed, t), so the forest does not depend on how many
/// threads train it.
RandomForest train_random_forest(const Matrix& x, std::span<const int> y, int n_classes,
                                 const ForestParams& params = {});

/// Index of the winning class among per-class vote counts (ties to lowest).
int majority_vote(std::span<const int> votes);

}  // namespace chitin
