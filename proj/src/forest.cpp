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

#include "chitin/forest.hpp"

#include <cmath>
#include <numeric>

#include "chitin/error.hpp"
#include "chitin/parallel.hpp"
#include "chitin/random.hpp"

namespace chitin {

int majority_vote(std::span<const int> votes) {
  int best = 0;
  for (std::size_t c = 1; c < votes.size(); ++c) {
    if (votes[c] > votes[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  }
  return best;
}

std::vector<int> RandomForest::votes(std::span<const double> x) const {
  if (trees.empty()) throw Error(ErrorCode::UntrainedModel, "forest has no trees");
  if (x.size() != n_features) {
    throw Error(ErrorCode::ShapeMismatch, "forest expects " + std::to_string(n_features) + " features, got " +
                                              std::to_string(x.size()));
  }
  std::vector<int> counts(static_cast<std::size_t>(n_classes), 0);
  for (const auto& tree : trees) ++counts[static_cast<std::size_t>(tree.predict(x))];
  return counts;
}

int RandomForest::predict(std::span<const double> x) const { return majority_vote(votes(x)); }

RandomForest train_random_forest(const Matrix& x, std::span<const int> y, int n_classes, const ForestParams& params) {
  if (params.n_estimators < 1) throw Error(ErrorCode::InvalidArgument, "n_estimators must be >= 1");
  if (x.rows == 0 || y.size() != x.rows) throw Error(ErrorCode::ShapeMismatch, "rows and labels disagree");

  TreeParams tree_params;
  tree_params.max_depth = params.max_depth;
  tree_params.min_samples_split = params.min_samples_split;
  tree_params.max_features = params.max_features > 0
                                 ? params.max_features
                                 : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(x.cols))));

  RandomForest forest;
  forest.n_classes = n_classes;
  forest.n_features = x.cols;
  forest.trees.resize(static_cast<std::size_t>(params.n_estimators));

  parallel_for(forest.trees.size(), [&](std::size_t t) {
    Rng rng(derive_seed(params.base_seed, {t}));
    std::vector<std::size_t> rows(x.rows);
    if (params.bootstrap) {
      for (auto& r : rows) r = static_cast<std::size_t>(rng.below(x.rows));
    } else {
      std::iota(rows.begin(), rows.end(), 0);
    }
    forest.trees[t] = grow_tree(x, y, n_classes, std::move(rows), tree_params, rng);
  });
  return forest;
}

}  // namespace chitin
