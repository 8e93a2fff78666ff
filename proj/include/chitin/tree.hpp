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
#include "chitin/random.hpp"

namespace chitin {

/// 1 - sum_i (c_i / total)^2. Throws EmptyNode when the counts sum to zero.
double gini(std::span<const double> counts);

/// Smallest impurity decrease accepted as a split; guards against splits
/// whose only "gain" is floating-point noise.
inline constexpr double kMinSplitGain = 1e-12;

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // x[feature] <= threshold goes left
  int left = -1;
  int right = -1;
  std::vector<double> class_counts;  // training samples reaching the node
  int predicted = 0;                 // argmax of class_counts, ties to lowest
  double impurity = 0.0;             // Gini of class_counts

  bool is_leaf() const { return feature < 0; }
  double n_samples() const;

  bool operator==(const TreeNode&) const = default;
};

/// Classification tree stored as a flat node array; node 0 is the root and
/// children always follow their parent.
struct DecisionTree {
  std::vector<TreeNode> nodes;
  int n_classes = 0;
  std::size_t n_features = 0;

  int leaf_index(std::span<const double> x) const;
  int predict(std::span<const double> x) const;
  std::size_t depth() const;
  std::size_t leaf_count() const;

  bool operator==(const DecisionTree&) const = default;
};

struct TreeParams {
  int max_depth = -1;  // unlimited
  int min_samples_split = 2;
  std::uint64_t seed = 42;
  // Features tried per split; 0 means all of them in index order. With a
  // smaller count a fresh random subset is drawn at every node, and further
  // features are visited until a valid split turns up.
  int max_features = 0;
};

/// CART exact greedy growth on Gini. Thresholds are midpoints between
/// consecutive distinct values; ties go to the lowest feature index, then the
/// lowest threshold.
DecisionTree train_decision_tree(const Matrix& x, std::span<const int> y, int n_classes, const TreeParams& params = {});

/// Grows a tree on a multiset of row indices (duplicates allowed, as in a
/// bootstrap sample). rng is consulted only when max_features is in use.
DecisionTree grow_tree(const Matrix& x, std::span<const int> y, int n_classes, std::vector<std::size_t> rows,
                       const TreeParams& params, Rng& rng);

/// Per-feature sum of (n_node / n_root) * weighted Gini decrease over the
/// tree's splits. Not normalized.
std::vector<double> impurity_decrease(const DecisionTree& tree);

}  // namespace chitin
